"""Command-line interface: ``covchan {family,classify,solve,capacity,check}``.

Exit status is 0 on success, 2 for malformed input or violated constraints
and 3 when a covariance problem has no solution.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from .basis import gell_mann_basis
from .capacity import closed_form_capacity, covariant_capacity
from .channel import affine_rep, classify, map_from_choi
from .covariance import (
    SchurError,
    check_covariance,
    check_symmetry,
    normalize_tp,
    solve_intertwiners_finite,
    solve_intertwiners_lie,
    solve_symmetric_finite,
)
from .fileio import channel_to_dict, encode_matrix, fmt12, jsonable, read_channel, read_choi, write_channel
from .groups import (
    HADAMARD_IRREPS,
    SU3_LABELS,
    LieAlgebraRep,
    abelian_irrep,
    clock,
    cyclic_irrep,
    cyclic_rep,
    hadamard_group,
    hadamard_irrep,
    pauli_group,
    pauli_subgroup,
    s3_reps,
    su3_rep,
    u1_phase_rep,
    u1u1_phase_rep,
)
from .zoo import CPWarning, FamilySpec, make_family, so_rep

EXIT_OK, EXIT_INPUT, EXIT_EMPTY = 0, 2, 3


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("COVCHAN_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"COVCHAN_SEED must be an integer, got {env!r}") from None
    return 0


def _value(text: str):
    try:
        return float(text)
    except ValueError:
        pass
    try:
        return complex(text.replace("i", "j"))
    except ValueError:
        return text


def _params(items) -> dict:
    out = {}
    for item in items or []:
        for part in item.split(","):
            if "=" not in part:
                raise InputError(f"parameter must look like key=value, got {part!r}")
            k, v = part.split("=", 1)
            out[k.strip()] = v.strip() if k.strip() == "gen" else _value(v.strip())
    return out


def _sweep(text: str) -> tuple[str, list[float]]:
    try:
        key, rng = text.split("=", 1)
        a, b, step = (float(x) for x in rng.split(":"))
    except ValueError:
        raise InputError(f"sweep must look like p=start:stop:step, got {text!r}") from None
    if step <= 0 or b < a:
        raise InputError("sweep needs start <= stop and a positive step")
    n = int(math.floor((b - a) / step + 1e-9))
    return key, [round(a + k * step, 12) for k in range(n + 1)]


def _emit(doc, out):
    text = json.dumps(jsonable(doc), indent=1, allow_nan=False)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _build_family(name, d, params) -> tuple:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", CPWarning)
        ch = make_family(FamilySpec(name, d, params))
    msgs = [str(w.message) for w in caught if issubclass(w.category, CPWarning)]
    for m in msgs:
        print(f"warning: {m}", file=sys.stderr)
    return ch, msgs


# ---------------------------------------------------------------------------
# group registry
# ---------------------------------------------------------------------------


def _z3():
    return cyclic_rep(3, clock(3), name="<Z>")


def _finite_rep(group: str, label: str):
    if group == "s3":
        S = s3_reps()
        if label == "defining":
            return S.defining
        if label in S.irreps:
            return S.irreps[label]
        raise InputError(f"unknown s3 representation {label!r}; use defining, 1, 1' or 2")
    if label != "defining":
        raise InputError(f"group {group} only supports the defining representation, got {label!r}")
    if group == "z3":
        return _z3()
    if group == "hadamard":
        return hadamard_group(3)
    if group == "pauli":
        return pauli_group(3)
    raise InputError(f"unknown group {group!r}")


def _lie_rep(group: str, label: str):
    if group == "su3":
        if label not in SU3_LABELS:
            raise InputError(f"unknown su3 irrep {label!r}; expected one of {', '.join(SU3_LABELS)}")
        return su3_rep(label)
    if label != "defining":
        raise InputError(f"group {group} only supports the defining representation, got {label!r}")
    if group == "u1":
        return u1_phase_rep()
    if group == "u1u1":
        return u1u1_phase_rep()
    if group.startswith("so"):
        return so_rep(int(group[2:] or 3))
    raise InputError(f"unknown group {group!r}")


LIE_GROUPS = ("su3", "u1", "u1u1", "so3")
FINITE_GROUPS = ("s3", "z3", "hadamard", "pauli")


def _rep(group, label):
    if group in FINITE_GROUPS:
        return _finite_rep(group, label)
    if group in LIE_GROUPS:
        return _lie_rep(group, label)
    raise InputError(f"unknown group {group!r}; expected one of {', '.join(FINITE_GROUPS + LIE_GROUPS)}")


def _omega(group, label, reference):
    if group == "s3":
        irreps = s3_reps().irreps
        if label not in irreps:
            raise InputError(f"unknown s3 irrep {label!r}; use 1, 1' or 2")
        return irreps[label]
    if group == "z3":
        try:
            return cyclic_irrep(reference, int(label) % 3)
        except ValueError:
            raise InputError(f"z3 irreps are labelled 0, 1, 2; got {label!r}") from None
    if group == "hadamard":
        if label not in HADAMARD_IRREPS:
            raise InputError(f"hadamard irreps are {', '.join(HADAMARD_IRREPS)}; got {label!r}")
        return hadamard_irrep(reference, label)
    if group == "su3":
        return _lie_rep("su3", label)
    if group in ("u1", "u1u1"):
        try:
            q = [float(x) for x in label.split(",")]
        except ValueError:
            raise InputError(f"{group} irreps are labelled by charges, got {label!r}") from None
        if len(q) != (1 if group == "u1" else 2):
            raise InputError(f"{group} irreps need {1 if group == 'u1' else 2} charge(s)")
        return abelian_irrep(group, q)
    raise InputError(f"cannot solve for group {group!r}")


def _trivial_lie(rep: LieAlgebraRep) -> LieAlgebraRep:
    return LieAlgebraRep("trivial", rep.algebra, np.zeros_like(rep.generators), rep.n_cartan)


def _parse_action(text: str, symmetric: bool):
    parts = text.split(":")
    group = parts[0]
    if symmetric:
        if group == "pauli":
            mn = parts[1] if len(parts) > 1 else "01"
            if len(mn) != 2 or not mn.isdigit() or mn == "00":
                raise InputError(f"pauli subgroup generator must be two digits, got {mn!r}")
            H = pauli_subgroup(3, int(mn[0]), int(mn[1]))
            return H, H
        if len(parts) > 2:
            raise InputError("--symmetric-under takes group[:rep]")
        label = parts[1] if len(parts) > 1 else ("3" if group == "su3" else "defining")
        r = _rep(group, label)
        return r, r
    if len(parts) not in (1, 3):
        raise InputError("--covariant-under takes group or group:d1:d2")
    if len(parts) == 1:
        label = "3" if group == "su3" else "defining"
        r = _rep(group, label)
        return r, r
    return _rep(group, parts[1]), _rep(group, parts[2])


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_family(args) -> int:
    params = _params(args.param)
    ch, msgs = _build_family(args.name, args.dim, params)
    c = classify(ch)
    ch = ch.with_meta(tp=c.tp, cp=c.cp, unital=c.unital, warnings=msgs)
    if args.out:
        write_channel(ch, args.out)
    else:
        print(json.dumps(channel_to_dict(ch), indent=1))
    return EXIT_OK


def cmd_classify(args) -> int:
    if args.from_choi:
        ch = map_from_choi(read_choi(args.from_choi), label="from-choi")
    elif args.file:
        ch = read_channel(args.file)
    else:
        raise InputError("classify needs a channel file or --from-choi")
    c = classify(ch, tol=args.tol)
    ar = affine_rep(ch, gell_mann_basis(ch.d))
    doc = {
        "label": ch.label, "dim": ch.d, "cp": c.cp, "tp": c.tp, "unital": c.unital,
        "min_choi_eigenvalue": c.min_choi_eigenvalue, "tp_residual": c.tp_residual,
        "unital_residual": c.unital_residual, "lambda00": ar.lambda_full[0, 0],
        "row0_norm": float(np.linalg.norm(ar.row0)), "col0_norm": float(np.linalg.norm(ar.col0)),
        "lambda": ar.lambda_full,
    }
    _emit(doc, args.out)
    return EXIT_OK


def cmd_solve(args) -> int:
    g = args.group
    if g not in ("su3", "s3", "z3", "hadamard", "u1", "u1u1"):
        raise InputError(f"solve supports su3, s3, z3, hadamard, u1, u1u1; got {g!r}")
    default = "3" if g == "su3" else "defining"
    d1 = _rep(g, args.d1 or default)
    if g in LIE_GROUPS:
        d2 = _trivial_lie(d1) if args.symmetric else _rep(g, args.d2 or default)
        omega = _omega(g, args.omega, d1)
        sol = solve_intertwiners_lie(d1, d2, omega)
    else:
        omega = _omega(g, args.omega, d1)
        if args.symmetric:
            sol = solve_symmetric_finite(d1, omega)
        else:
            sol = solve_intertwiners_finite(d1, _rep(g, args.d2 or default), omega)
    doc = {
        "group": g, "d1": args.d1 or default, "d2": None if args.symmetric else (args.d2 or default),
        "omega": args.omega, "symmetric": args.symmetric, "multiplicity": sol.multiplicity,
        "predicted": sol.predicted, "residual": sol.residual,
        "kraus_basis": [[encode_matrix(A) for A in mult] for mult in sol.kraus_multiplets],
    }
    if sol.multiplicity == 0:
        _emit(doc, args.out)
        target = "D1" if args.symmetric else "D1 (x) conj(D2)"
        print(f"no solution: irrep {args.omega} does not occur in {target}", file=sys.stderr)
        return EXIT_EMPTY
    if args.tp_normalize:
        chans = []
        for j in range(sol.multiplicity):
            try:
                ch = normalize_tp(sol.multiplet(np.eye(sol.multiplicity)[j]), label=f"{g}:omega={args.omega}:{j}")
            except SchurError as exc:
                chans.append({"multiplet": j, "error": str(exc)})
                continue
            ch = ch.with_meta(group=g, omega=args.omega, multiplet=j)
            if args.channel_prefix:
                path = f"{args.channel_prefix}{j}.json"
                write_channel(ch, path)
                chans.append({"multiplet": j, "file": path})
            else:
                chans.append({"multiplet": j, "channel": channel_to_dict(ch)})
        doc["channels"] = chans
    _emit(doc, args.out)
    return EXIT_OK


def _closed_form(family, params):
    if family not in ("su3-8", "su3-6", "symmetric-pauli") or (family == "su3-8" and "p" not in params):
        return None
    try:
        return closed_form_capacity(family, params)
    except ValueError:
        return None


def cmd_capacity(args) -> int:
    seed = _seed(args)
    points = []
    if args.file:
        if args.family or args.sweep:
            raise InputError("give either a channel file or --family, not both")
        ch = read_channel(args.file)
        fam, params = ch.meta.get("family"), ch.meta.get("params", {})
        points.append((None, ch, fam, params))
    elif args.family:
        base = _params(args.param)
        if args.sweep:
            key, values = _sweep(args.sweep)
        else:
            key, values = None, [None]
        for v in values:
            params = dict(base)
            if key is not None:
                params[key] = v
            ch, _ = _build_family(args.family, args.dim, params)
            points.append((v, ch, args.family, params))
    else:
        raise InputError("capacity needs a channel file or --family")

    rows = []
    for v, ch, fam, params in points:
        c = classify(ch)
        if not (c.cp and c.tp) and not args.force:
            raise InputError(f"channel is not CPTP (cp={c.cp}, tp={c.tp}); use --force to proceed")
        rep = covariant_capacity(ch, seed=seed, restarts=args.restarts, check=not args.force)
        cf = _closed_form(fam, params) if fam else None
        rows.append({
            "param": v, "s_min": rep.s_min, "capacity": rep.capacity, "closed_form": cf,
            "abs_diff": None if cf is None else abs(rep.capacity - cf),
            "restarts_converged": rep.restarts_converged, "minimizer": rep.minimizer,
        })
    if args.csv:
        key = _sweep(args.sweep)[0] if args.sweep else "param"
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow([key, "s_min", "capacity", "closed_form", "abs_diff"])
            for r in rows:
                w.writerow(["" if r["param"] is None else fmt12(r["param"]), fmt12(r["s_min"]),
                            fmt12(r["capacity"]),
                            "" if r["closed_form"] is None else fmt12(r["closed_form"]),
                            "" if r["abs_diff"] is None else fmt12(r["abs_diff"])])
    doc = rows[0] if len(rows) == 1 and not args.sweep else {"points": rows}
    _emit(doc, args.out)
    return EXIT_OK


def cmd_check(args) -> int:
    ch = read_channel(args.file)
    if (args.covariant_under is None) == (args.symmetric_under is None):
        raise InputError("give exactly one of --covariant-under or --symmetric-under")
    seed = _seed(args)
    if args.covariant_under:
        d1, d2 = _parse_action(args.covariant_under, symmetric=False)
        r = check_covariance(ch, d1, d2, tol=args.tol, seed=seed)
        doc = {"covariant": r.covariant, "max_residual": r.max_residual, "action": args.covariant_under}
    else:
        d1, _ = _parse_action(args.symmetric_under, symmetric=True)
        r = check_symmetry(ch, d1, tol=args.tol, seed=seed)
        doc = {"symmetric": r.symmetric, "max_residual": r.max_residual, "action": args.symmetric_under}
    _emit(doc, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="covchan", description="Covariant qutrit channel toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("family", help="build a named channel family and write a channel file")
    f.add_argument("name")
    f.add_argument("--param", action="append", metavar="K=V", help="family parameter (repeatable)")
    f.add_argument("--dim", type=int, default=3)
    f.add_argument("--out")
    f.set_defaults(func=cmd_family)

    c = sub.add_parser("classify", help="CP/TP/unital flags and affine representation")
    c.add_argument("file", nargs="?")
    c.add_argument("--from-choi", metavar="FILE", help="JSON {dim, choi} instead of a channel file")
    c.add_argument("--tol", type=float, default=1e-9)
    c.add_argument("--out")
    c.set_defaults(func=cmd_classify)

    s = sub.add_parser("solve", help="Kraus multiplets intertwining D1, D2 and an irrep")
    s.add_argument("--group", required=True)
    s.add_argument("--d1")
    s.add_argument("--d2")
    s.add_argument("--omega", required=True)
    s.add_argument("--symmetric", action="store_true", help="solve A D(g) = sum Omega(g) A instead")
    s.add_argument("--tp-normalize", action="store_true", help="emit a trace-preserving channel per multiplet")
    s.add_argument("--channel-prefix", help="write normalized channels to PREFIX<j>.json")
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    k = sub.add_parser("capacity", help="minimum output entropy and one-shot capacity")
    k.add_argument("file", nargs="?")
    k.add_argument("--family")
    k.add_argument("--param", action="append", metavar="K=V")
    k.add_argument("--dim", type=int, default=3)
    k.add_argument("--sweep", metavar="K=START:STOP:STEP")
    k.add_argument("--csv")
    k.add_argument("--restarts", type=int, default=32)
    k.add_argument("--seed", type=int)
    k.add_argument("--force", action="store_true", help="evaluate maps that are not CPTP")
    k.add_argument("--out")
    k.set_defaults(func=cmd_capacity)

    h = sub.add_parser("check", help="covariance or symmetry residual of a channel file")
    h.add_argument("file")
    h.add_argument("--covariant-under", metavar="GROUP[:D1:D2]")
    h.add_argument("--symmetric-under", metavar="GROUP[:REP]")
    h.add_argument("--tol", type=float, default=1e-9)
    h.add_argument("--seed", type=int)
    h.add_argument("--out")
    h.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
