"""Command-line interface.

Subcommands: simulate, fit, predict, cv, stability, consistency.  Every run
echoes its fully resolved configuration (including the seed) so any output
can be reproduced exactly.  Exit codes: 0 success, 1 runtime/data error,
2 usage error.
"""

import argparse
import json
import sys

import numpy as np

from vda import consistency as consistency_mod
from vda import datagen, dataio, model as model_mod, tuning
from vda.tuning import Grid


def _fresh_seed() -> int:
    return int(np.random.SeedSequence().entropy % (2 ** 32))


def _echo_config(name, args_dict):
    resolved = {k: v for k, v in sorted(args_dict.items()) if v is not None}
    print(f"config [{name}]: {json.dumps(resolved, default=str)}")


def _parse_float_list(text):
    try:
        return tuple(float(v) for v in text.split(",") if v.strip() != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad numeric list {text!r}")


def _confusion(labels, preds):
    classes = sorted(set(labels.tolist()))
    table = {c: {d: 0 for d in classes} for c in classes}
    for t, q in zip(labels, preds):
        table[t][q] += 1
    return classes, table


def _print_confusion(labels, preds, title):
    classes, table = _confusion(labels, preds)
    width = max(len(str(c)) for c in classes) + 2
    print(title)
    print(" " * width + "".join(f"{c!s:>{width}}" for c in classes))
    for c in classes:
        row = "".join(f"{table[c][d]:>{width}}" for d in classes)
        print(f"{c!s:>{width}}" + row)
    err = float(np.mean(labels != preds))
    print(f"training points: {len(labels)}  misclassification: {err:.4f}")


def _grid_from_args(args, X, labels):
    if args.grid_l is not None or args.grid_e is not None:
        gl = args.grid_l or (0.0,)
        ge = args.grid_e or (0.0,)
        # zeros are allowed as single points but a mixed grid must increase
        return Grid(lambda_l=gl, lambda_e=ge)
    return tuning.default_grid(X, labels, n_points=args.grid_points)


def cmd_simulate(args):
    seed = args.seed if args.seed is not None else _fresh_seed()
    spec = datagen.SimSpec(design=args.design, seed=seed, n=args.n, p=args.p,
                           k=args.k, d=args.d, rho=args.rho).resolved()
    _echo_config("simulate", {"design": spec.design, "n": spec.n, "p": spec.p,
                              "k": spec.k, "d": spec.d, "rho": spec.rho,
                              "seed": seed, "out": args.out})
    X, labels, bayes_ref = datagen.generate(spec)
    dataio.write_dataset(args.out, X, labels)
    print(f"wrote {X.shape[0]} rows x {X.shape[1] + 1} columns to {args.out}")
    if bayes_ref is not None:
        print(f"reference Bayes error: {bayes_ref}%")
    return 0


def cmd_fit(args):
    _echo_config("fit", vars(args) | {"func": None})
    ds = dataio.read_csv(args.data, label_column=args.label_column)
    m = model_mod.train(ds.X, ds.labels, lambda_l=args.lambda_l,
                        lambda_e=args.lambda_e, epsilon=args.epsilon,
                        delta=args.delta, polynomial=args.polynomial,
                        tol=args.tol, max_sweeps=args.max_sweeps)
    model_mod.save(m, args.model)
    active = model_mod.active_predictors(m)
    names = [ds.feature_names[i] for i in active]
    print(f"model written to {args.model}")
    print(f"classes ({m.k}): {m.labels}")
    print(f"active predictors ({len(active)}): {names}")
    fr = m.fit_result
    print(f"sweeps: {fr.sweeps_used}  converged: {fr.converged}  "
          f"objective: {fr.objective_trace[-1]:.6g}")
    preds = model_mod.predict(m, ds.X)
    _print_confusion(ds.labels, preds, "training confusion (rows=true):")
    return 0


def cmd_predict(args):
    _echo_config("predict", vars(args) | {"func": None})
    m = model_mod.load(args.model)
    try:
        ds = dataio.read_csv(args.data, label_column=args.label_column)
        X, labels = ds.X, ds.labels
    except dataio.CsvParseError:
        raise
    preds = model_mod.predict(m, X)
    dataio.write_rows(args.out, ["row", "predicted"],
                      [(i + 1, p) for i, p in enumerate(preds)])
    print(f"wrote {len(preds)} predictions to {args.out}")
    if labels is not None:
        _print_confusion(labels, preds, "confusion vs. file labels:")
    return 0


def cmd_cv(args):
    seed = args.seed if args.seed is not None else _fresh_seed()
    _echo_config("cv", vars(args) | {"func": None, "seed": seed})
    ds = dataio.read_csv(args.data, label_column=args.label_column)
    grid = _grid_from_args(args, ds.X, ds.labels)
    result = tuning.cross_validate(ds.X, ds.labels, grid, folds=args.folds,
                                   seed=seed)
    dataio.write_rows(args.out, ["lambda_L", "lambda_E", "mean_error", "se"],
                      result.rows())
    print(f"wrote CV table to {args.out}")
    print(f"best cell: lambda_l={result.best_lambda_l:.6g} "
          f"lambda_e={result.best_lambda_e:.6g}")
    if args.plot:
        from vda import plots
        plots.cv_figure(result, args.plot)
        print(f"figure written to {args.plot}")
    return 0


def cmd_stability(args):
    seed = args.seed if args.seed is not None else _fresh_seed()
    _echo_config("stability", vars(args) | {"func": None, "seed": seed})
    ds = dataio.read_csv(args.data, label_column=args.label_column)
    if args.grid_l is not None:
        grid = Grid(lambda_l=args.grid_l, lambda_e=args.grid_e or (0.1,))
    else:
        base = tuning.default_grid(ds.X, ds.labels,
                                   n_points=args.grid_points)
        grid = Grid(lambda_l=base.lambda_l, lambda_e=args.grid_e or (0.1,))
    report = tuning.stability_select(ds.X, ds.labels, grid,
                                     n_subsamples=args.subsamples,
                                     pi=args.pi, seed=seed)
    dataio.write_rows(args.out, ["predictor", "lambda_L", "lambda_E",
                                 "pi_hat"], report.rows())
    stable_names = [ds.feature_names[i] for i in report.stable_set]
    print(f"wrote selection probabilities to {args.out}")
    print(f"stable set ({len(stable_names)}): {stable_names}")
    print(f"q = {report.q:.4f}  false-positive bound = {report.fp_bound:.6f}")
    if args.plot:
        from vda import plots
        plots.stability_figure(report, args.plot)
        print(f"figure written to {args.plot}")
    return 0


def cmd_consistency(args):
    seed = args.seed if args.seed is not None else _fresh_seed()
    _echo_config("consistency", vars(args) | {"func": None, "seed": seed})
    k = args.k
    prob_list = []
    if args.probs:
        probs = np.asarray(args.probs, dtype=float)
        if len(probs) != k:
            raise ValueError(f"--probs needs {k} entries for k={k}")
        prob_list.append(probs)
    if args.random:
        rng = np.random.Generator(np.random.PCG64(seed))
        prob_list.extend(rng.dirichlet(np.ones(k))
                         for _ in range(args.random))
    if not prob_list:
        raise ValueError("give --probs and/or --random N")

    rows = []
    landscapes = []
    for probs in prob_list:
        land = consistency_mod.minimize_risk(probs, k)
        landscapes.append(land)
        flag = ("boundary" if land.on_boundary
                else "exterior" if land.exterior else "interior")
        rows.append(tuple(probs) + tuple(land.minimizer)
                    + (land.winner, flag, land.min_value))
    header = ([f"p{j + 1}" for j in range(k)]
              + [f"z{j + 1}" for j in range(k - 1)]
              + ["winner", "boundary_flag", "min_risk"])
    dataio.write_rows(args.out, header, rows)
    print(f"wrote {len(rows)} risk minimizers to {args.out}")
    for probs, land in zip(prob_list, landscapes):
        p_txt = ",".join(f"{v:.4f}" for v in probs)
        print(f"p=({p_txt}) -> winner class {land.winner} "
              f"({'boundary' if land.on_boundary else 'exterior'})")
    if args.grid_out or args.plot:
        if k != 3:
            raise ValueError("contour output is only available for k=3")
        grid_rows = consistency_mod.contour_grid(prob_list[0], k)
        if args.grid_out:
            dataio.write_rows(args.grid_out, ["z1", "z2", "risk"], grid_rows)
            print(f"contour grid written to {args.grid_out}")
        if args.plot:
            from vda import plots
            plots.consistency_figure(grid_rows, landscapes[0], args.plot)
            print(f"figure written to {args.plot}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vda",
        description="Penalized vertex discriminant analysis: classification "
                    "with simultaneous variable selection.")
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("simulate", help="generate a simulation dataset")
    ps.add_argument("--design", required=True, choices=datagen.DESIGNS)
    ps.add_argument("--n", type=int)
    ps.add_argument("--p", type=int)
    ps.add_argument("--k", type=int)
    ps.add_argument("--d", type=float, default=1.0)
    ps.add_argument("--rho", type=float, default=0.8)
    ps.add_argument("--seed", type=int)
    ps.add_argument("--out", required=True)
    ps.set_defaults(func=cmd_simulate)

    def add_data_opts(p):
        p.add_argument("--data", required=True)
        p.add_argument("--label-column")

    pf = sub.add_parser("fit", help="fit a model at fixed penalties")
    add_data_opts(pf)
    pf.add_argument("--lambda-l", type=float, default=0.0)
    pf.add_argument("--lambda-e", type=float, default=0.0)
    pf.add_argument("--epsilon", type=float)
    pf.add_argument("--delta", type=float)
    pf.add_argument("--polynomial", choices=["quartic", "quadratic"],
                    default="quartic")
    pf.add_argument("--tol", type=float, default=1e-6)
    pf.add_argument("--max-sweeps", type=int, default=1000)
    pf.add_argument("--model", required=True)
    pf.set_defaults(func=cmd_fit)

    pp = sub.add_parser("predict", help="predict labels with a saved model")
    add_data_opts(pp)
    pp.add_argument("--model", required=True)
    pp.add_argument("--out", required=True)
    pp.set_defaults(func=cmd_predict)

    pc = sub.add_parser("cv", help="cross-validate the penalty grid")
    add_data_opts(pc)
    pc.add_argument("--folds", type=int, default=10)
    pc.add_argument("--seed", type=int)
    pc.add_argument("--grid-l", type=_parse_float_list)
    pc.add_argument("--grid-e", type=_parse_float_list)
    pc.add_argument("--grid-points", type=int, default=10)
    pc.add_argument("--out", required=True)
    pc.add_argument("--plot")
    pc.set_defaults(func=cmd_cv)

    pst = sub.add_parser("stability", help="stability selection")
    add_data_opts(pst)
    pst.add_argument("--pi", type=float, default=0.9)
    pst.add_argument("--subsamples", type=int, default=100)
    pst.add_argument("--seed", type=int)
    pst.add_argument("--grid-l", type=_parse_float_list)
    pst.add_argument("--grid-e", type=_parse_float_list)
    pst.add_argument("--grid-points", type=int, default=10)
    pst.add_argument("--out", required=True)
    pst.add_argument("--plot")
    pst.set_defaults(func=cmd_stability)

    pco = sub.add_parser("consistency",
                         help="risk minimizers / Bayes-rule check")
    pco.add_argument("--k", type=int, default=3)
    pco.add_argument("--probs", type=_parse_float_list)
    pco.add_argument("--random", type=int)
    pco.add_argument("--seed", type=int)
    pco.add_argument("--out", required=True)
    pco.add_argument("--grid-out")
    pco.add_argument("--plot")
    pco.set_defaults(func=cmd_consistency)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
