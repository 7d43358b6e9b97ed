"""Command line interface.

Reports are line-oriented ``key: value`` text.  Exit status is 0 on
success, 1 when a verification fails and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import catalog
from .enumeration import BudgetExceeded, EnumerationState, coset_short_vectors, short_vectors
from .lattice import LatticeError, dual, file_hash, is_even, is_unimodular, read_gram, write_gram

THREADS_ENV = "GAMMA72_THREADS"


class VerificationFailed(Exception):
    def __init__(self, what: str, lines: list[str] | None = None):
        super().__init__(what)
        self.lines = lines


class UsageError(Exception):
    pass


# -- helpers --------------------------------------------------------------------

def _emit(args, lines: list[str]) -> None:
    text = "\n".join(lines) + "\n"
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    sys.stdout.write(text)


def _vector(text: str) -> list[Fraction]:
    try:
        return [Fraction(t) for t in text.replace(",", " ").split()]
    except ValueError as e:
        raise UsageError(f"bad vector {text!r}: {e}") from None


def _require(cond: bool, what: str, lines: list[str] | None = None) -> None:
    if not cond:
        raise VerificationFailed(what, lines)


def _structure(args):
    path = getattr(args, "structure", None)
    sp = catalog.load_leech_structure(path)
    src = Path(path) if path else catalog.data_path(catalog.LEECH_STRUCTURE)
    return sp, f"structure_sha256: {file_hash(src)}"


def _leech_polarization(args):
    from .polarization import polarization_from_structure
    sp, h = _structure(args)
    return polarization_from_structure(sp.lattice("Leech"), sp), h


def _histogram(rep) -> list[str]:
    return [f"count_norm_{k}: {v}" for k, v in sorted(rep.count_by_norm.items())] + [f"total: {rep.total}"]


def _state_path(args, name: str) -> Path | None:
    if not args.checkpoint_dir:
        return None
    d = Path(args.checkpoint_dir)
    d.mkdir(parents=True, exist_ok=True)
    return d / f"{name}.npz"


def _enumerate(args, run, name: str):
    """Run an enumeration with budget/resume support through the checkpoint dir."""
    path = _state_path(args, name)
    state = None
    if args.resume and path is not None and path.exists():
        state = EnumerationState.load(path)
    try:
        return run(state)
    except BudgetExceeded as e:
        if path is not None and e.report.state is not None:
            e.report.state.save(path)
        raise VerificationFailed(f"node budget exhausted after {e.report.nodes} nodes"
                                 + (f"; state saved to {path}" if path else "")) from None


# -- commands ---------------------------------------------------------------------

def cmd_info(args) -> list[str]:
    L = read_gram(args.gram)
    return [f"input_sha256: {file_hash(args.gram)}", f"rank: {L.rank}", f"det: {L.det}",
            f"integral: {str(L.is_integral).lower()}",
            f"even: {str(L.is_integral and is_even(L)).lower()}",
            f"unimodular: {str(L.is_integral and is_unimodular(L)).lower()}"]


def _dump(args, L, rep, header: list[str]) -> None:
    if not args.dump:
        return
    if rep.shift is None:
        rows = [" ".join(map(str, r)) for r in rep.vectors]
    else:
        rows = [" ".join(map(str, p)) for p in rep.points()]
    Path(args.dump).write_text("\n".join(["# " + h for h in header] + rows) + "\n")


def cmd_short_vectors(args) -> list[str]:
    L = read_gram(args.gram)
    b = Fraction(args.bound)
    collect = bool(args.dump)
    rep = _enumerate(args, lambda st: short_vectors(L, b, budget=args.budget, collect=collect, resume=st),
                     "short_vectors")
    head = [f"input_sha256: {file_hash(args.gram)}", f"bound: {b}"]
    _dump(args, L, rep, head)
    return head + _histogram(rep)


def cmd_coset(args) -> list[str]:
    L = read_gram(args.gram)
    t = _vector(args.shift)
    if len(t) != L.rank:
        raise UsageError(f"shift has {len(t)} entries, lattice has rank {L.rank}")
    b = Fraction(args.bound)
    collect = bool(args.dump)
    rep = _enumerate(args, lambda st: coset_short_vectors(L, t, b, budget=args.budget,
                                                          collect=collect, resume=st), "coset")
    head = [f"input_sha256: {file_hash(args.gram)}", f"bound: {b}",
            "shift: " + " ".join(str(x) for x in rep.shift)]
    _dump(args, L, rep, head)
    return head + _histogram(rep)


def cmd_dual(args) -> list[str]:
    L = read_gram(args.gram)
    D = dual(L)
    if args.out_gram:
        write_gram(D, args.out_gram)
    return [f"input_sha256: {file_hash(args.gram)}", f"rank: {D.rank}", f"det: {D.det}"]


def _hermitian_input(args):
    from .hermitian import S_GAMMA, hermitian_from_structure
    if args.source == "barnes":
        return catalog.build_barnes(), "source: barnes"
    sp = catalog.load_leech_structure(args.source) if args.leech else _any_structure(args.source)
    return hermitian_from_structure(sp.lattice(), sp, S_GAMMA), f"structure_sha256: {file_hash(args.source)}"


def _any_structure(path):
    from .hermitian import read_structure
    return read_structure(path)


def cmd_trace(args) -> list[str]:
    from .hermitian import trace_lattice
    P, h = _hermitian_input(args)
    L = trace_lattice(P, Fraction(args.s))
    if args.out_gram:
        write_gram(L, args.out_gram)
    return [h, f"s: {Fraction(args.s)}", f"rank: {L.rank}", f"det: {L.det}",
            f"integral: {str(L.is_integral).lower()}"]


def cmd_tensor(args) -> list[str]:
    from .hermitian import hermitian_tensor, trace_lattice
    P, h = _hermitian_input(args)
    T = hermitian_tensor(P, catalog.build_barnes())
    L = trace_lattice(T, Fraction(args.s))
    if args.out_gram:
        write_gram(L, args.out_gram)
    lines = [h, "factor: barnes", f"s: {Fraction(args.s)}", f"rank: {L.rank}", f"det: {L.det}",
             f"integral: {str(L.is_integral).lower()}"]
    if L.is_integral:
        lines += [f"even: {str(is_even(L)).lower()}", f"unimodular: {str(is_unimodular(L)).lower()}"]
    return lines


def cmd_find_structure(args) -> list[str]:
    from .hermitian import NotFound, find_structure, validate_structure, write_structure
    L = read_gram(args.gram)
    try:
        sp = find_structure(L, budget=args.budget or 1_000_000, seed=args.seed)
    except NotFound as e:
        raise VerificationFailed(str(e)) from None
    _require(validate_structure(sp), "found structure fails its identities")
    if args.out_structure:
        write_structure(sp, args.out_structure)
    return [f"input_sha256: {file_hash(args.gram)}", f"seed: {args.seed}", "structure: found"]


def cmd_validate_structure(args) -> list[str]:
    from .hermitian import parse_structure
    try:
        sp = parse_structure(Path(args.structure_file).read_text())
    except LatticeError as e:
        raise VerificationFailed(str(e)) from None
    L = sp.lattice()
    return [f"structure_sha256: {file_hash(args.structure_file)}", f"dim: {sp.dim}",
            "identities: ok", f"even: {str(is_even(L)).lower()}",
            f"unimodular: {str(is_unimodular(L)).lower()}"]


def _polarization(args):
    from .polarization import isotropic_complement_pair, mod2_space, polarization_from_structure, preimages
    if args.gram:
        L = read_gram(args.gram)
        space = mod2_space(L)
        U, V = isotropic_complement_pair(space, args.seed)
        return preimages(space, U, V), [f"input_sha256: {file_hash(args.gram)}", f"seed: {args.seed}"]
    if args.structure:
        sp = _any_structure(args.structure)
        return (polarization_from_structure(sp.lattice(), sp),
                [f"structure_sha256: {file_hash(args.structure)}"])
    pol, h = _leech_polarization(args)
    return pol, [h]


def cmd_polarize(args) -> list[str]:
    pol, head = _polarization(args)
    out = Path(args.out_dir) if args.out_dir else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
        write_gram(pol.half("M"), out / "M_half.gram")
        write_gram(pol.half("N"), out / "N_half.gram")
    from . import _linalg as la
    return head + [f"dim: {pol.dim}", f"index_M: {abs(la.int_det(pol.m_rows()))}",
                   f"index_N: {abs(la.int_det(pol.n_rows()))}",
                   "M_half_even_unimodular: true", "N_half_even_unimodular: true",
                   "complementary: true"]


def cmd_construction_i(args) -> list[str]:
    from .polarization import construction_I
    pol, head = _polarization(args)
    C = construction_I(pol, args.k)
    if args.out_gram:
        write_gram(C, args.out_gram)
    return head + [f"k: {args.k}", f"rank: {C.rank}", f"det: {C.det}",
                   f"even: {str(is_even(C)).lower()}", f"unimodular: {str(is_unimodular(C)).lower()}"]


def cmd_neighbor(args) -> list[str]:
    from .polarization import neighbor_2
    M = read_gram(args.gram)
    w = _vector(args.w)
    N = neighbor_2(M, w)
    if args.out_gram:
        write_gram(N, args.out_gram)
    return [f"input_sha256: {file_hash(args.gram)}", "w: " + " ".join(map(str, w)),
            f"rank: {N.rank}", f"det: {N.det}", f"integral: {str(N.is_integral).lower()}"]


def cmd_class_table(args) -> list[str]:
    from .census import class_table
    pol, h = _leech_polarization(args)
    t = class_table(pol)
    return [h, f"classes: {len(t)}", f"frame_size: {t.frames.shape[1]}", "frames_orthogonal: true"]


def cmd_w_sets(args) -> list[str]:
    from .census import check_24A1, class_table, w2_set, w3_set
    pol, h = _leech_polarization(args)
    reps = class_table(pol).representatives
    idx = sorted(random.Random(args.seed).sample(range(len(reps)), min(args.sample, len(reps))))
    lines = [h, f"seed: {args.seed}", f"sampled: {len(idx)}"]
    for i in idx:
        w = reps[i]
        W2 = w2_set(pol, w)
        check_24A1(pol, w, W2)
        n3 = len(w3_set(pol, w))
        _require(n3 == 4096, f"|W3(w)| = {n3} for class {i}, expected 4096")
        lines.append(f"class_{i}: W2=48 24A1=ok W3={n3}")
    return lines


def cmd_design_counts(args) -> list[str]:
    from .census import DESIGN_TABLE, _norm8_of, class_table, design_counts
    solved = design_counts()
    lines = ["moment_solution: " + " ".join(map(str, solved))]
    _require(solved == DESIGN_TABLE, f"moment solution {solved} differs from {DESIGN_TABLE}")
    if args.direct:
        pol, h = _leech_polarization(args)
        reps = class_table(pol).representatives
        X = _norm8_of(pol, "M")
        idx = sorted(random.Random(args.seed).sample(range(len(reps)), min(args.sample, len(reps))))
        lines = [h, f"seed: {args.seed}"] + lines
        for i in idx:
            d = design_counts(True, pol, reps[i], X)
            _require(d == solved, f"direct counts {d} differ for class {i}")
            lines.append(f"direct_class_{i}: " + " ".join(map(str, d)))
    return lines


def cmd_census(args) -> list[str]:
    from .census import CensusData, cross_check, norm6_census
    pol, h = _leech_polarization(args)
    if args.full and args.sample:
        raise UsageError("--full and --sample are exclusive")
    sample = None if args.full else (args.sample or 32)
    ck = None
    if args.checkpoint_dir:
        ck = Path(args.checkpoint_dir) / "census"
    if args.resume and ck is None:
        raise UsageError("--resume needs --checkpoint-dir")
    if ck is not None and not args.resume and ck.exists() and any(ck.iterdir()):
        raise UsageError(f"{ck} holds checkpoints; pass --resume to reuse them")
    data = CensusData(pol)
    rep = norm6_census(pol, sample, seed=args.seed, checkpoint=ck, method=args.method, data=data)
    lines = [h, f"method: {args.method}", f"seed: {args.seed}"] + rep.lines()
    if args.cross_check:
        lines.append(f"cross_check_pairs: {cross_check(data, args.cross_check, seed=args.seed)}")
    if rep.complete:
        lines.append(f"closed_form_4_2_2: {rep.type_counts[(4, 2, 2)]}")
        _require(rep.enumerated_422 == rep.type_counts[(4, 2, 2)], "enumerated (4,2,2) count differs", lines)
    _require(rep.b6 == 0, f"norm-6 vectors found: b6 = {rep.b6}", lines)
    return lines


def cmd_verify_decomp(args) -> list[str]:
    from .decomposition import split, verify_decomposition
    G = catalog.build_gamma(args.structure)
    b = split(G)
    lines = [f"structure_sha256: {file_hash(args.structure or catalog.data_path(catalog.LEECH_STRUCTURE))}"]
    lines += b.lines()
    _require(b.index_K == 2 ** 24 and b.index_I == 2 ** 24, "indices differ from 2^24")
    _require(b.minima == {"I1": 2, "I2": 4, "K1": 8, "K2": 8}, f"unexpected minima {b.minima}")
    ck = Path(args.checkpoint_dir) / "decomp" if args.checkpoint_dir else None
    if args.resume and ck is None:
        raise UsageError("--resume needs --checkpoint-dir")
    recs = verify_decomposition(b, sample=None if args.exhaustive else args.sample,
                                seed=args.seed, checkpoint=ck)
    lines += [f"seed: {args.seed}", f"checked: {len(recs)}"] + [r.line() for r in recs]
    bad = [r.index for r in recs if not r.passed]
    lines.append(f"failed: {len(bad)}")
    _require(not bad, f"I(w) has vectors of norm <= 4 for units {bad[:10]}", lines)
    return lines


def cmd_build(args) -> list[str]:
    out = Path(args.out_dir) if args.out_dir else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
    name = args.name
    if name == "barnes":
        from .hermitian import trace_lattice
        P = catalog.build_barnes()
        L = trace_lattice(P, 1)
        lines = ["name: barnes", "hermitian_rank: 3", f"trace_det_s1: {L.det}", "hermitian_unimodular: true"]
    elif name == "gamma":
        gb = catalog.build_gamma(args.structure, full=True)
        L = gb.tensor
        src = args.structure or catalog.data_path(catalog.LEECH_STRUCTURE)
        lines = ["name: gamma", f"structure_sha256: {file_hash(src)}"] + gb.lines()
    elif name == "leech":
        L = catalog.build_leech()
        lines = ["name: leech", f"rank: {L.rank}", f"det: {L.det}", "even: true", "minimum: 4",
                 "kissing: 196560"]
    else:
        L = catalog.build_e8()
        from .enumeration import kissing_number
        m, k = kissing_number(L)
        lines = ["name: e8", f"rank: {L.rank}", f"det: {L.det}", f"minimum: {m}", f"kissing: {k}"]
    if out:
        write_gram(L, out / f"{name}.gram")
        lines.append(f"gram_sha256: {file_hash(out / f'{name}.gram')}")
        (out / f"{name}.cert").write_text("\n".join(lines) + "\n")
    return lines


# -- parser -------------------------------------------------------------------------

def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--threads", type=int, default=d, help=f"thread cap (default ${THREADS_ENV} or 1)")
    p.add_argument("--budget", type=int, default=d, help="enumeration node budget")
    p.add_argument("--checkpoint-dir", default=d)
    p.add_argument("--seed", type=int, default=d)
    p.add_argument("--out", default=d, help="also write the report here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gamma72", description=__doc__.splitlines()[0])
    _global_flags(parser, False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, True)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help, aliases=()):
        p = sub.add_parser(name, parents=[common], help=help, aliases=list(aliases))
        p.set_defaults(func=func)
        return p

    p = add("info", cmd_info, "invariants of a Gram file")
    p.add_argument("gram")

    for name, func in (("short-vectors", cmd_short_vectors), ("coset", cmd_coset)):
        p = add(name, func, "lattice vectors up to a norm bound" if name == "short-vectors"
                else "vectors of the coset t + L up to a norm bound")
        p.add_argument("gram")
        p.add_argument("--bound", required=True)
        p.add_argument("--dump", help="write the vectors to this file")
        p.add_argument("--resume", action="store_true")
        if name == "coset":
            p.add_argument("--shift", required=True, help="coordinates of t, e.g. '1/2 0 1/2'")

    p = add("dual", cmd_dual, "dual lattice")
    p.add_argument("gram")
    p.add_argument("--out-gram")

    for name, func in (("trace", cmd_trace), ("tensor", cmd_tensor)):
        p = add(name, func, "trace lattice" if name == "trace" else "tensor with the Barnes lattice")
        p.add_argument("source", help="'barnes' or a structure file")
        p.add_argument("--s", default="1" if name == "trace" else "1/7")
        p.add_argument("--leech", action="store_true", help="also require the Leech checks")
        p.add_argument("--out-gram")

    p = add("find-structure", cmd_find_structure, "search a Z[alpha]-structure")
    p.add_argument("gram")
    p.add_argument("--out-structure")

    p = add("validate-structure", cmd_validate_structure, "check a structure file")
    p.add_argument("structure_file")

    for name, func, al in (("polarize", cmd_polarize, ("build-polarization",)),
                           ("construction-i", cmd_construction_i, ())):
        p = add(name, func, "polarization (M, N) of a lattice" if name == "polarize"
                else "Construction I lattice L(N, M, k)", al)
        g = p.add_mutually_exclusive_group()
        g.add_argument("--gram", help="polarize this lattice with --seed")
        g.add_argument("--structure", help="use M = alpha L, N = beta L")
        if name == "polarize":
            p.add_argument("--out-dir")
        else:
            p.add_argument("--k", type=int, default=3)
            p.add_argument("--out-gram")

    p = add("neighbor", cmd_neighbor, "Kneser 2-neighbour")
    p.add_argument("gram")
    p.add_argument("--w", required=True)
    p.add_argument("--out-gram")

    for name, func in (("class-table", cmd_class_table), ("w-sets", cmd_w_sets),
                       ("design-counts", cmd_design_counts), ("census", cmd_census)):
        p = add(name, func, {"class-table": "the 4095 norm-8 classes of N / 2Lambda",
                             "w-sets": "the sets W2 and W3 for sampled classes",
                             "design-counts": "inner-product distribution of Leech on a class",
                             "census": "norm-6 and norm-8 counts of Gamma"}[name])
        p.add_argument("--structure", help="Leech structure file (default: shipped)")
        if name in ("w-sets", "design-counts", "census"):
            p.add_argument("--sample", type=int, default=None if name == "census" else 32)
    sub.choices["design-counts"].add_argument("--direct", action="store_true")
    pc = sub.choices["census"]
    pc.add_argument("--full", action="store_true")
    pc.add_argument("--resume", action="store_true")
    pc.add_argument("--method", choices=("fast", "generic"), default="fast")
    pc.add_argument("--cross-check", type=int, default=0, metavar="PAIRS")

    p = add("verify-decomp", cmd_verify_decomp, "24 + 48 decomposition checks")
    p.add_argument("--structure")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--sample", type=int, default=64)
    g.add_argument("--exhaustive", action="store_true")
    p.add_argument("--resume", action="store_true")

    p = add("build", cmd_build, "build and self-check a catalog lattice")
    p.add_argument("name", choices=("gamma", "leech", "e8", "barnes"))
    p.add_argument("--structure")
    p.add_argument("--out-dir")
    return parser


def _set_threads(n: int) -> None:
    import warnings

    import numba
    with warnings.catch_warnings():
        # numba reports an unusable TBB layer once; it falls back silently
        warnings.simplefilter("ignore")
        numba.set_num_threads(max(1, min(n, numba.config.NUMBA_NUM_THREADS)))


def cli_main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    if args.seed is None:
        args.seed = 0
    if args.threads is None:
        args.threads = int(os.environ.get(THREADS_ENV, "1"))
    try:
        _set_threads(args.threads)
        lines = args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except (FileNotFoundError, IsADirectoryError) as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except VerificationFailed as e:
        if e.lines:
            _emit(args, e.lines + [f"verification_failed: {e}"])
        print(f"verification failed: {e}", file=sys.stderr)
        return 1
    except (LatticeError, catalog.SelfCheckFailed, ArithmeticError, RuntimeError, ValueError) as e:
        print(f"verification failed: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    _emit(args, lines)
    return 0


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
