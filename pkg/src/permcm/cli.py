"""Command-line interface: ``permcm <command> --degree n --group "(1,2,3)" ...``."""

from __future__ import annotations

import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import click

from . import polyring
from .bases import (
    DEFAULT_SHELLING_BUDGET,
    CellBasis,
    cell_basis_from_shelling,
    cm_report,
    find_shelling,
    goebel_decompose,
    greedy_cell_basis,
    represent_on_basis,
)
from .errors import BudgetExceeded, ParseError, PermcmError
from .permgrp import (
    DEFAULT_CAP,
    PermutationGroup,
    format_group,
    huffman_classify,
    parse_cycles,
    rr_subgroup,
    subgroup_classes,
)
from .polyring import Domain, Polynomial, orbit_monomial
from .qcomplex import QuotientComplex, build_quotient_complex, homology, is_cm_complex, quotient_homology

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
SURVEY_MAX_DEGREE = 6


@dataclass
class Config:
    degree: int = 1
    domain: Domain = polyring.Z
    cap: int = DEFAULT_CAP
    budget: int = DEFAULT_SHELLING_BUDGET
    primes: list[int] | None = None
    output: str = "text"
    jobs: int = 1


def parse_group(spec: str, degree: int) -> PermutationGroup:
    """Group of the given degree generated by permutations in cycle notation."""
    return parse_cycles(spec, degree)


def parse_polynomial(expr: str, degree: int, domain: Domain = polyring.Z) -> Polynomial:
    return polyring.parse_polynomial(expr, degree, domain)


def resolve_budget(flag: int | None) -> int:
    """An explicit --budget wins, then PERMCM_BUDGET, then the default."""
    if flag is not None:
        return flag
    env = os.environ.get("PERMCM_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise click.UsageError(f"PERMCM_BUDGET must be an integer, got {env!r}") from None
    return DEFAULT_SHELLING_BUDGET


def _emit(cfg: Config, data, text: str) -> None:
    if cfg.output == "json":
        click.echo(json.dumps(data, indent=2, ensure_ascii=False))
    else:
        click.echo(text)


def _fail(message: str, code: int) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


class _Command(click.Group):
    """Maps library errors onto the documented exit codes."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except BudgetExceeded as exc:
            _fail(str(exc), EXIT_BUDGET)
        except ParseError as exc:
            _fail(f"parse error: {exc}", EXIT_USAGE)
        except PermcmError as exc:
            _fail(f"{type(exc).__name__}: {exc}", EXIT_USAGE)


def _domain(_ctx, _param, value: str) -> Domain:
    try:
        return Domain.parse(value)
    except (ParseError, PermcmError) as exc:
        raise click.BadParameter(str(exc)) from None


def common(f):
    f = click.option("--format", "output", type=click.Choice(["text", "json"]), default="text",
                     help="Output format.")(f)
    f = click.option("--coeff", "domain", default="z", callback=_domain,
                     help="Coefficient domain: z, q or fp:<p>.")(f)
    f = click.option("--group", "group_spec", default="",
                     help='Generators in cycle notation, e.g. "(1,2,3,4)(1,3)".')(f)
    f = click.option("--degree", type=click.IntRange(min=1), required=True,
                     help="Number of points n.")(f)
    return f


def _setup(degree: int, group_spec: str, domain: Domain, output: str
           ) -> tuple[Config, PermutationGroup]:
    cfg = Config(degree=degree, domain=domain, output=output)
    return cfg, parse_group(group_spec, degree)


def _complex(group: PermutationGroup) -> QuotientComplex:
    if group.degree < 2:
        raise click.UsageError("the quotient complex needs --degree at least 2")
    return build_quotient_complex(group)


@click.group(cls=_Command)
@click.version_option(package_name="artifact")
def main():
    """Invariants of permutation groups: quotient complexes, module bases and CM tests."""


@main.command()
@common
def grr(degree, group_spec, domain, output):
    """The subgroup generated by transpositions, double transpositions and 3-cycles."""
    cfg, G = _setup(degree, group_spec, domain, output)
    sub, index = rr_subgroup(G)
    try:
        label = huffman_classify(G)
    except PermcmError:
        label = None
    data = {"group": format_group(G), "order": G.order, "grr_generators": [str(g) for g in sub.generators],
            "grr_order": sub.order, "grr_index": index, "huffman": label}
    text = (f"G = <{data['group']}> of order {G.order}\n"
            f"G_rr = <{', '.join(data['grr_generators'])}> of order {sub.order}, index {index}")
    if label:
        text += f"\nHuffman case: {label}"
    _emit(cfg, data, text)


@main.command()
@common
def complex(degree, group_spec, domain, output):
    """Faces and facets of the quotient complex."""
    cfg, G = _setup(degree, group_spec, domain, output)
    qc = _complex(G)
    facet_pos = {f: j for j, f in enumerate(qc.facets)}
    lines = [f"{len(qc.faces)} faces, {len(qc.facets)} facets"]
    for i, face in enumerate(qc.faces):
        ks = ",".join(map(str, face.rank_set)) or "-"
        ins = [j for j in range(len(qc.facets)) if qc.facet_masks[i] >> j & 1]
        mark = f"  facet {facet_pos[i]}" if i in facet_pos else ""
        lines.append(f"{i:4d}  {face.label:<16} K={{{ks}}}  in facets {ins}{mark}")
    _emit(cfg, qc.to_json(), "\n".join(lines))


@main.command()
@common
@click.option("--budget", type=click.IntRange(min=1), default=None,
              help="Node budget for the search (default: PERMCM_BUDGET or 10^6).")
def shelling(degree, group_spec, domain, output, budget):
    """Search for a shelling of the quotient complex."""
    cfg, G = _setup(degree, group_spec, domain, output)
    qc = _complex(G)
    sh = find_shelling(qc, resolve_budget(budget))
    if sh is None:
        _emit(cfg, {"shellable": False}, "not shellable")
        return
    labels = [qc.faces[f].label for f in sh.facets]
    minimal = [qc.faces[a].label for a in sh.minimal_faces]
    data = {"shellable": True, "facets": labels, "minimal_faces": minimal}
    text = "\n".join(f"{j + 1}. {f:<16} new from {a}" for j, (f, a) in enumerate(zip(labels, minimal)))
    _emit(cfg, data, text)


def _basis(qc: QuotientComplex, kind: str, domain: Domain, budget: int) -> CellBasis:
    if kind == "cell":
        return greedy_cell_basis(qc, domain)
    sh = find_shelling(qc, budget)
    if sh is None:
        raise click.UsageError("complex is not shellable; try --basis cell")
    return cell_basis_from_shelling(qc, sh, domain)


basis_option = click.option("--basis", "basis_kind", type=click.Choice(["shelling", "cell"]),
                            default="shelling", help="How to choose the basis faces.")
budget_option = click.option("--budget", type=click.IntRange(min=1), default=None,
                             help="Node budget for the shelling search.")


@main.command()
@common
@basis_option
@budget_option
def cellbasis(degree, group_spec, domain, output, basis_kind, budget):
    """A basis of orbit monomials for the invariants over the symmetric polynomials."""
    cfg, G = _setup(degree, group_spec, domain, output)
    qc = _complex(G)
    basis = _basis(qc, basis_kind, domain, resolve_budget(budget))
    monos = [m.format() for m in basis.orbit_monomials("R")]
    data = {"basis": basis_kind, "faces": [qc.faces[i].subsets() for i in basis.faces],
            "labels": basis.labels, "orbit_monomials": monos,
            "determinant": str(basis.determinant)}
    text = "\n".join([f"{lab:<16} {m}" for lab, m in zip(basis.labels, monos)]
                     + [f"determinant {basis.determinant}"])
    _emit(cfg, data, text)


poly_option = click.option("--poly", required=True, help='Polynomial such as "x1*x3^4".')
orbit_option = click.option("--orbit", is_flag=True,
                            help="Replace each monomial of --poly by its orbit sum.")


def _invariant(G: PermutationGroup, poly: str, domain: Domain, as_orbit: bool) -> Polynomial:
    f = parse_polynomial(poly, G.degree, domain)
    if as_orbit:
        total = Polynomial(G.degree, {}, domain)
        for m, c in f.terms.items():
            total = total + orbit_monomial(G, m, domain).scale(c)
        f = total
    return f


@main.command()
@common
@poly_option
@orbit_option
def goebel(degree, group_spec, domain, output, poly, orbit):
    """Decompose an invariant over special orbit monomials."""
    cfg, G = _setup(degree, group_spec, domain, output)
    qc = _complex(G) if degree >= 2 else None
    dec = goebel_decompose(G, _invariant(G, poly, domain, orbit), complex_=qc)
    text = "\n".join(f"{d['label']:<16} {d['coeff']}" for d in dec.to_json()) or "0"
    _emit(cfg, dec.to_json(), text)


@main.command()
@common
@poly_option
@orbit_option
@basis_option
@budget_option
def represent(degree, group_spec, domain, output, poly, orbit, basis_kind, budget):
    """Coefficients of an invariant on a shelling or cell basis."""
    cfg, G = _setup(degree, group_spec, domain, output)
    qc = _complex(G)
    basis = _basis(qc, basis_kind, domain if basis_kind == "shelling" or domain.is_field else polyring.Q,
                   resolve_budget(budget))
    coeffs = represent_on_basis(G, _invariant(G, poly, domain, orbit), basis)
    rows = [{"face": qc.faces[a].subsets(), "label": qc.faces[a].label, "coeff": coeffs[a].format("s")}
            for a in basis.faces if a in coeffs]
    text = "\n".join(f"{r['label']:<16} {r['coeff']}" for r in rows) or "0"
    _emit(cfg, rows, text)


@main.command(name="homology")
@common
@click.option("--mode", type=click.Choice(["intervals", "full"]), default="intervals",
              help="Which links the CM check visits.")
def homology_cmd(degree, group_spec, domain, output, mode):
    """Reduced homology of the quotient by two routes, and the topological CM verdict."""
    cfg, G = _setup(degree, group_spec, domain, output)
    qc = _complex(G)
    cellular = quotient_homology(qc)
    order = homology(qc.face_poset_complex())
    cm = is_cm_complex(qc, domain, mode)
    agree = [str(g) for g in cellular] == [str(g) for g in order[:len(cellular)]]
    data = {"reduced_homology": {str(i - 1): g.to_json() for i, g in enumerate(cellular)},
            "routes_agree": agree, "cm": cm.is_cm,
            "witness": None if cm.witness is None else [str(w) for w in cm.witness]}
    lines = [f"H~_{i - 1} = {g}" for i, g in enumerate(cellular)]
    lines.append(f"cellular and order-complex routes {'agree' if agree else 'DISAGREE'}")
    lines.append(f"Cohen-Macaulay over {domain}: {'yes' if cm.is_cm else 'no'}"
                 + (f" (witness {cm.witness[0]}, H~_{cm.witness[1]} = {cm.witness[2]})" if cm.witness else ""))
    _emit(cfg, data, "\n".join(lines))
    if not agree:
        sys.exit(EXIT_MISMATCH)


def _parse_primes(text: str | None) -> list[int] | None:
    if not text:
        return None
    try:
        return [int(t) for t in text.replace(";", ",").split(",") if t.strip()]
    except ValueError:
        raise click.BadParameter(f"bad prime list {text!r}") from None


def _report_text(rep) -> str:
    alg = "; ".join(f"p={p}: {v['count']}/{v['expected']}" for p, v in rep.algebraic.items()) or "none"
    topo = "" if rep.topological is None else f", topological {'CM' if rep.topological else 'not CM'}"
    return (f"<{rep.group or '()'}> order {rep.order}, [G:G_rr] = {rep.grr_index}, predicted "
            f"{'CM' if rep.prediction else 'not CM'}, counts {alg}{topo}: "
            f"{'agree' if rep.agree else 'MISMATCH'}")


@main.command()
@common
@click.option("--primes", default=None, help="Comma-separated primes to test instead of those dividing [G:G_rr].")
@click.option("--topological", is_flag=True, help="Also run the link-homology test over Z.")
def cm(degree, group_spec, domain, output, primes, topological):
    """Compare the predicted CM verdict with generator counts (and optionally topology)."""
    cfg, G = _setup(degree, group_spec, domain, output)
    rep = cm_report(G, _parse_primes(primes), topological)
    _emit(cfg, rep.to_json(), _report_text(rep))
    if not rep.agree:
        sys.exit(EXIT_MISMATCH)


def _survey_one(args: tuple[int, str, bool]):
    degree, spec, topological = args
    return cm_report(parse_group(spec, degree), topological=topological)


@main.command()
@click.option("--degree", type=click.IntRange(1, SURVEY_MAX_DEGREE), required=True)
@click.option("--format", "output", type=click.Choice(["text", "json"]), default="text")
@click.option("--jobs", type=click.IntRange(min=1), default=1, help="Worker processes.")
@click.option("--topological", is_flag=True, help="Also run the link-homology test over Z.")
def survey(degree, output, jobs, topological):
    """Run the CM comparison on every conjugacy class of subgroups of S_n."""
    cfg = Config(degree=degree, output=output, jobs=jobs)
    work = [(degree, format_group(G), topological) for G in subgroup_classes(degree)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_survey_one, work))
    else:
        reports = [_survey_one(w) for w in work]
    mismatches = sum(not r.agree for r in reports)
    summary = "Everything matched!" if not mismatches else f"{mismatches} mismatches"
    data = {"degree": degree, "classes": len(reports), "reports": [r.to_json() for r in reports],
            "mismatches": mismatches}
    text = "\n".join([_report_text(r) for r in reports]
                     + [f"{len(reports)} classes. {summary}"])
    _emit(cfg, data, text)
    if mismatches:
        sys.exit(EXIT_MISMATCH)


if __name__ == "__main__":
    main()
