"""Command-line front end: figure-preset scenarios and generic sweeps to CSV.

Batch, non-interactive.  ``cavent run --scenario figN`` reproduces one of the
ten standard illustrations as a CSV time series; ``cavent run --config path``
runs a custom sweep described by a flat key-value file; ``cavent presets``
lists the presets; ``cavent check`` runs the built-in cross-oracle self-test
families and reports their residuals.

Config grammar (one ``key = value`` per line, ``#`` starts a comment)::

    scenario   = custom            # or fig1..fig10
    model      = cavity3d-symmetric | cavity3d-asymmetric |
                 cavity1d-p2 | cavity1d-p1
    tau_start  = 0.0
    tau_end    = 3.0
    tau_points = 1000
    measures   = Y,Ltilde          # from the fixed vocabulary
    out        = series.csv
    # model parameters, e.g.
    nu = 16.666666666666668        # 3D models
    theta1 = 1.0
    theta3 = 1.0
    pair = 1,3                     # 1D models
    sweep = kappa                  # 1D p2: uniform grid in kappa, not tau
    curve = fock n=1               # 1D p1 (repeatable): state per curve

Measure vocabulary: Y, Ytilde, Y2, Ltilde, K2, Z, Ic, Jc, E1, E3, nbar.
For the 1D models E1/E3 are the normalized energies of the pair (r, s) and
nbar expands to one mean-photon column per mode of the pair.  CSV values are
written with 17 significant digits; identical configs produce byte-identical
files.

Exit codes: 0 success, 2 config error, 3 numerical/domain error,
4 convergence or cross-oracle failure.
"""

import argparse
import math
import sys

import numpy as np

from . import cavity1d, cavity3d, specfun
from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    InvalidCovarianceError,
    OracleMismatchError,
)

MEASURE_NAMES = ("Y", "Ytilde", "Y2", "Ltilde", "K2", "Z", "Ic", "Jc",
                 "E1", "E3", "nbar")
MODELS = ("cavity3d-symmetric", "cavity3d-asymmetric",
          "cavity1d-p2", "cavity1d-p1")
_STATE_KINDS = ("vacuum", "thermal", "fock", "coherent", "squeezed",
                "even_coherent", "odd_coherent")


class ScenarioConfig:
    """Validated scenario: model, parameters, grid, measures, output path."""

    def __init__(self, scenario, model, params, tau_grid, measures_list,
                 output_path, curves=None, sweep="tau"):
        self.scenario = scenario
        self.model = model
        self.params = dict(params)
        self.tau_grid = tau_grid  # (start, end, points)
        self.measures = list(measures_list)
        self.output_path = output_path
        self.curves = curves or []
        self.sweep = sweep

    def grid(self) -> np.ndarray:
        start, end, points = self.tau_grid
        return np.linspace(start, end, points)


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------

_NU_CUBE = 96.0 * (5.0 / 12.0) ** 2  # {111}/{511} degenerate pair: 50/3
_THETA_ROOM = 140.0                  # 1 cm cavity at room temperature


def _preset_configs() -> dict:
    t3 = _THETA_ROOM / 3.0
    presets = {
        "fig1": ScenarioConfig(
            "fig1", "cavity3d-symmetric",
            {"nu": _NU_CUBE, "theta1": 1.0, "theta3": 1.0},
            (0.0, 3.0, 1000), ["Y2", "Ltilde"], "fig1.csv"),
        "fig2": ScenarioConfig(
            "fig2", "cavity3d-symmetric",
            {"nu": _NU_CUBE},
            (0.0, 3.0, 1000), ["Ic"], "fig2.csv",
            curves=[("vacuum", {"theta1": 1.0, "theta3": 1.0}),
                    ("hot", {"theta1": _THETA_ROOM, "theta3": t3})]),
        "fig3": ScenarioConfig(
            "fig3", "cavity3d-symmetric",
            {"nu": _NU_CUBE, "theta1": _THETA_ROOM, "theta3": t3},
            (0.0, 3.0, 1000), ["Ltilde", "Y2"], "fig3.csv"),
        "fig4": ScenarioConfig(
            "fig4", "cavity3d-asymmetric",
            {"nu": 100.0, "theta1": 1.0, "theta3": 1.0},
            (0.0, 4.0, 1000), ["Y", "Ltilde", "Jc"], "fig4.csv"),
        "fig5": ScenarioConfig(
            "fig5", "cavity3d-asymmetric",
            {"nu": 100.0},
            (0.0, 4.0, 1000), ["Y", "Ltilde"], "fig5.csv",
            curves=[("vacuum", {"theta1": 1.0, "theta3": 1.0}),
                    ("hot", {"theta1": _THETA_ROOM, "theta3": t3})]),
        "fig6": ScenarioConfig(
            "fig6", "cavity1d-p2", {},
            (0.0, 0.99, 1000), ["Y"], "fig6.csv",
            curves=[("pair13", {"pair": (1, 3)}), ("pair35", {"pair": (3, 5)})],
            sweep="kappa"),
        "fig7": ScenarioConfig(
            "fig7", "cavity1d-p2", {"pair": (1, 3)},
            (0.0, 0.99, 1000), ["Y", "Jc", "Ltilde", "Y2", "Z"], "fig7.csv",
            sweep="kappa"),
        "fig8": ScenarioConfig(
            "fig8", "cavity1d-p1", {"pair": (1, 2)},
            (0.0, 6.0, 1000), ["Y"], "fig8.csv",
            curves=[("fock1", {"state": ("fock", 1.0)}),
                    ("fock50", {"state": ("fock", 50.0)}),
                    ("fock1000", {"state": ("fock", 1000.0)}),
                    ("sqz1", {"state": ("squeezed", 1.0)}),
                    ("sqz50", {"state": ("squeezed", 50.0)}),
                    ("sqz1000", {"state": ("squeezed", 1000.0)})]),
        "fig9": ScenarioConfig(
            "fig9", "cavity1d-p1", {"pair": (1, 2), "state": ("fock", 1.0)},
            (0.0, 3.0, 1000), ["nbar"], "fig9.csv"),
        "fig10": ScenarioConfig(
            "fig10", "cavity1d-p1", {"pair": (1, 2)},
            (0.0, 6.0, 1000), ["Ltilde", "Z"], "fig10.csv",
            curves=[("sqz1", {"state": ("squeezed", 1.0)}),
                    ("sqz50", {"state": ("squeezed", 50.0)}),
                    ("sqz1000", {"state": ("squeezed", 1000.0)})]),
    }
    return presets


def preset(name: str) -> ScenarioConfig:
    presets = _preset_configs()
    if name not in presets:
        raise ConfigError([f"unknown scenario {name!r}; presets: "
                           + ", ".join(sorted(presets))])
    return presets[name]


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------

def validate_config(text: str) -> ScenarioConfig:
    """Parse a flat key-value scenario document, collecting all violations."""
    problems = []
    raw = {}
    curves = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            problems.append(f"line {lineno}: expected 'key = value'")
            continue
        key, value = (part.strip() for part in stripped.split("=", 1))
        if key == "curve":
            curves.append((lineno, value))
        elif key in raw:
            problems.append(f"line {lineno}: duplicate key {key!r}")
        else:
            raw[key] = (lineno, value)

    def take(key, default=None):
        if key in raw:
            return raw.pop(key)[1]
        return default

    scenario = take("scenario", "custom")
    if scenario != "custom":
        if raw or curves:
            problems.append("preset scenarios take no extra keys; "
                            "use scenario = custom for overrides")
        if problems:
            raise ConfigError(problems)
        return preset(scenario)

    model = take("model")
    if model is None:
        problems.append("missing required key 'model'")
    elif model not in MODELS:
        problems.append(f"unknown model {model!r}; choose from {', '.join(MODELS)}")

    def parse_float(key, default=None, minimum=None):
        text_v = take(key, None)
        if text_v is None:
            return default
        try:
            v = float(text_v)
        except ValueError:
            problems.append(f"key {key!r}: not a number: {text_v!r}")
            return default
        if minimum is not None and v < minimum:
            problems.append(f"key {key!r}: must be >= {minimum}, got {v}")
        return v

    tau_start = parse_float("tau_start", 0.0, minimum=0.0)
    tau_end = parse_float("tau_end", None)
    if tau_end is None:
        problems.append("missing required key 'tau_end'")
    points_text = take("tau_points", "1000")
    try:
        points = int(points_text)
        if points < 2:
            problems.append(f"tau_points must be >= 2, got {points}")
    except ValueError:
        problems.append(f"tau_points: not an integer: {points_text!r}")
        points = 2
    if (tau_end is not None and tau_start is not None and tau_end <= tau_start):
        problems.append(f"tau_end ({tau_end}) must exceed tau_start ({tau_start})")

    measures_text = take("measures", "")
    measure_list = [m.strip() for m in measures_text.split(",") if m.strip()]
    if not measure_list:
        problems.append("empty measure list; choose from " + ", ".join(MEASURE_NAMES))
    for m in measure_list:
        if m not in MEASURE_NAMES:
            problems.append(f"unknown measure {m!r}; choose from "
                            + ", ".join(MEASURE_NAMES))

    out = take("out", "series.csv")
    sweep = take("sweep", "tau")
    if sweep not in ("tau", "kappa"):
        problems.append(f"sweep must be 'tau' or 'kappa', got {sweep!r}")
    if sweep == "kappa" and model != "cavity1d-p2":
        problems.append("sweep = kappa applies to cavity1d-p2 only")

    params = {}
    if model in ("cavity3d-symmetric", "cavity3d-asymmetric"):
        nu = parse_float("nu", _NU_CUBE)
        params["nu"] = nu
        params["theta1"] = parse_float("theta1", 1.0, minimum=1.0)
        params["theta3"] = parse_float("theta3", 1.0, minimum=1.0)
        if nu is not None and nu <= 0.5:
            problems.append(f"nu = {nu} invalid: the slow rate sqrt(2 nu - 1) "
                            "must be real (nu > 1/2)")
        if model == "cavity3d-asymmetric" and nu is not None and 0.5 < nu < 20.0:
            problems.append(f"nu = {nu} too small for the asymmetric closed "
                            "forms (require nu >= 20)")
    elif model in ("cavity1d-p2", "cavity1d-p1"):
        pair_text = take("pair", "1,3" if model == "cavity1d-p2" else "1,2")
        try:
            r_s = tuple(int(v) for v in pair_text.split(","))
            if len(r_s) != 2:
                raise ValueError
            params["pair"] = r_s
            if model == "cavity1d-p2" and (r_s[0] % 2 == 0 or r_s[1] % 2 == 0):
                problems.append(f"pair {r_s}: even modes are never excited at p = 2")
            if min(r_s) < 1:
                problems.append(f"pair {r_s}: mode indices must be >= 1")
            if model == "cavity1d-p1" and r_s[0] == r_s[1]:
                problems.append(f"pair {r_s}: p = 1 measures need distinct modes")
        except ValueError:
            problems.append(f"pair: expected 'r,s' integers, got {pair_text!r}")
    curve_specs = []
    if model == "cavity1d-p1":
        state_text = take("state", "fock")
        nphot = parse_float("nbar", 1.0, minimum=0.0)
        if state_text not in _STATE_KINDS:
            problems.append(f"unknown state {state_text!r}; choose from "
                            + ", ".join(_STATE_KINDS))
        else:
            params["state"] = (state_text, nphot)
        for lineno, value in curves:
            spec = _parse_curve(value)
            if spec is None:
                problems.append(
                    f"line {lineno}: curve wants '<state> [nbar=<value>]' with a "
                    "state from " + ", ".join(_STATE_KINDS))
            else:
                curve_specs.append(spec)
    elif curves:
        problems.append("curve lines are supported for cavity1d-p1 custom runs only")

    if tau_end is not None and sweep == "kappa" and tau_end >= 1.0:
        problems.append(f"kappa sweep needs tau_end < 1 (got {tau_end})")

    for key, (lineno, _) in raw.items():
        problems.append(f"line {lineno}: unknown key {key!r}")

    if problems:
        raise ConfigError(problems)

    return ScenarioConfig("custom", model, params, (tau_start, tau_end, points),
                          measure_list, out, curves=curve_specs or None, sweep=sweep)


def _parse_curve(value: str):
    """'<state> [nbar=<value>]' -> (label, params) or None if malformed."""
    parts = value.split()
    if not parts or parts[0] not in _STATE_KINDS:
        return None
    size = 1.0
    for assign in parts[1:]:
        key, _, num = assign.partition("=")
        if key not in ("n", "nbar", "alpha2", "size") or not num:
            return None
        try:
            size = float(num)
        except ValueError:
            return None
    label = parts[0] if len(parts) == 1 else f"{parts[0]}_{size:g}"
    return label, {"state": (parts[0], size)}


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def _state_from_spec(spec) -> cavity1d.InitialState:
    kind, size = spec
    if kind == "vacuum":
        return cavity1d.InitialState.vacuum()
    if kind == "thermal":
        return cavity1d.InitialState.thermal(size)
    if kind == "fock":
        return cavity1d.InitialState.fock(int(size))
    if kind == "coherent":
        return cavity1d.InitialState.coherent(math.sqrt(size))
    if kind == "squeezed":
        # size is the mean photon number sinh^2(R)
        return cavity1d.InitialState.squeezed_vacuum(math.asinh(math.sqrt(size)))
    if kind == "even_coherent":
        return cavity1d.InitialState.even_coherent(math.sqrt(size))
    return cavity1d.InitialState.odd_coherent(math.sqrt(size))


def _row_values(model, params, tau):
    """Measure-name -> value mapping at one grid point."""
    out = {}
    if model in ("cavity3d-symmetric", "cavity3d-asymmetric"):
        regime = (cavity3d.Regime.SYMMETRIC if model == "cavity3d-symmetric"
                  else cavity3d.Regime.ASYMMETRIC)
        p = cavity3d.Cavity3DParams(nu=params["nu"], theta1=params["theta1"],
                                    theta3=params["theta3"], regime=regime)
        if regime is cavity3d.Regime.SYMMETRIC:
            ms = cavity3d.symmetric_entanglement(p, tau)
            e1, e3 = cavity3d.symmetric_energies(p, tau)
        else:
            ms = cavity3d.asymmetric_entanglement(p, tau)
            e1, e3 = cavity3d.asymmetric_energies(p, tau)
        out.update(ms.as_dict())
        out["E1"], out["E3"] = e1, e3
        out["nbar_1"], out["nbar_3"] = e1 - 0.5, e3 - 0.5
    elif model == "cavity1d-p2":
        r, s = params["pair"]
        ms = cavity1d.p2_entanglement(r, s, tau)
        mom = cavity1d.p2_moments_ode(r, s, tau).moments
        out.update(ms.as_dict())
        out["E1"], out["E3"] = mom.n_r + 0.5, mom.n_s + 0.5
        out[f"nbar_{r}"], out[f"nbar_{s}"] = mom.n_r, mom.n_s
    else:
        r, s = params["pair"]
        state = _state_from_spec(params["state"])
        ms = cavity1d.p1_entanglement(state, r, s, tau)
        out.update(ms.as_dict())
        out["E1"] = cavity1d.p1_mean_photons(state, r, tau) + 0.5
        out["E3"] = cavity1d.p1_mean_photons(state, s, tau) + 0.5
        out[f"nbar_{r}"] = cavity1d.p1_mean_photons(state, r, tau)
        out[f"nbar_{s}"] = cavity1d.p1_mean_photons(state, s, tau)
    return out


def _column_names(cfg: ScenarioConfig, label: str | None) -> list:
    cols = []
    r, s = cfg.params.get("pair", (1, 3))
    for m in cfg.measures:
        expanded = [f"nbar_{r}", f"nbar_{s}"] if m == "nbar" else [m]
        for name in expanded:
            cols.append(f"{label}:{name}" if label else name)
    return cols


def run_scenario(cfg: ScenarioConfig, out_path: str | None = None) -> str:
    """Evaluate the scenario on its grid and write the CSV; returns the path."""
    path = out_path or cfg.output_path
    grid = cfg.grid()
    header = ["tau"]
    if cfg.sweep == "kappa":
        header.append("kappa")
    curve_list = cfg.curves or [(None, {})]
    for label, _ in curve_list:
        header.extend(_column_names(cfg, label))

    lines = [",".join(header)]
    for g in grid:
        if cfg.sweep == "kappa":
            kappa = float(g)
            tau = math.atanh(kappa) / 2.0 if kappa < 1.0 else math.inf
            row = [_fmt(tau), _fmt(kappa)]
        else:
            tau = float(g)
            row = [_fmt(tau)]
        for label, overrides in curve_list:
            params = dict(cfg.params)
            params.update(overrides)
            values = _row_values(cfg.model, params, tau)
            for col in _column_names(cfg, label):
                name = col.split(":", 1)[-1]
                row.append(_fmt(values[name]))
        lines.append(",".join(row))
    payload = "\n".join(lines) + "\n"
    with open(path, "w", newline="") as fh:
        fh.write(payload)
    return path


def _fmt(v: float) -> str:
    return f"{v:.17g}"


# ---------------------------------------------------------------------------
# self-check
# ---------------------------------------------------------------------------

def run_check(stream=sys.stdout) -> int:
    """Cross-oracle self-test: evaluates each identity family and reports the
    max residual.  Returns a process exit code."""
    rows = []

    # Legendre relation across a modulus grid
    worst = 0.0
    for kap in np.arange(0.1, 0.95, 0.1):
        kt = math.sqrt((1.0 - kap) * (1.0 + kap))
        a = specfun.elliptic_ke(kt)
        b = specfun.elliptic_ke(kap)
        res = abs(a.e_big * b.k_big + b.e_big * a.k_big
                  - a.k_big * b.k_big - math.pi / 2.0)
        worst = max(worst, res)
    rows.append(("legendre-relation", worst, 1e-12))

    # hypergeometric representation of K
    ep = specfun.elliptic_ke(math.sqrt(1 - 0.25))
    res = abs(specfun.hyp2f1(0.5, 0.5, 1.0, 0.25) - 2.0 * ep.k_big / math.pi)
    rows.append(("hyp2f1-vs-elliptic", res, 1e-12))

    # first-column coefficients: elliptic forms vs generic closed form
    worst = 0.0
    for tau in (0.1, 0.5, 1.2):
        for idx in (1, -1, 3, -3, 5, -5, 7, -7):
            a = cavity1d.rho_elliptic(idx, tau)
            b = cavity1d.rho_coefficient(idx, 1, 2, tau)
            worst = max(worst, abs(a - b))
    rows.append(("mixing-coefficients", worst, 1e-10))

    # truncated-system unitarity at p = 2
    table = cavity1d.rho_ode_table(2, 0.5, window=(60, 60))
    rows.append(("unitarity-sums", max(cavity1d.unitarity_residuals(table)), 1e-6))

    # moment closed forms vs finite ODE system
    worst = 0.0
    for kappa in (0.2, 0.5, 0.8):
        tau = math.atanh(kappa) / 2.0
        for pair in ((1, 1), (1, 3), (3, 5)):
            mo = cavity1d.p2_moments_ode(*pair, tau).moments
            mc = cavity1d.p2_moments_closed(*pair, tau).moments
            for field in ("a_rs", "adag_r_a_s", "n_r", "n_s"):
                worst = max(worst, abs(getattr(mo, field) - getattr(mc, field)))
    rows.append(("pair-moments", worst, 1e-7))

    # 3D closed forms vs propagated covariance (built into the operation)
    worst = 0.0
    p = cavity3d.Cavity3DParams(nu=_NU_CUBE, theta1=3.0, theta3=2.0)
    for tau in (0.2, 0.7, 1.5):
        ms = cavity3d.symmetric_entanglement(p, tau)  # raises on mismatch
        worst = max(worst, 0.0 if ms.y >= 0 else 1.0)
    rows.append(("3d-closed-vs-covariance", worst, 1e-8))

    ok = True
    for name, res, tol in rows:
        status = "PASS" if res <= tol else "FAIL"
        ok = ok and res <= tol
        stream.write(f"{name:28s} residual {res:12.3e}  tolerance {tol:8.1e}  {status}\n")
    return 0 if ok else 4


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cavent",
        description="Entanglement dynamics of cavity modes with vibrating boundaries")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="evaluate a scenario and write CSV")
    group = run_p.add_mutually_exclusive_group(required=True)
    group.add_argument("--scenario", help="preset name (fig1..fig10)")
    group.add_argument("--config", help="path to a key-value config file")
    run_p.add_argument("--out", help="output CSV path (overrides the preset)")

    sub.add_parser("presets", help="list presets and their parameters")
    sub.add_parser("check", help="run the cross-oracle self-test suite")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            if args.scenario:
                cfg = preset(args.scenario)
            else:
                with open(args.config) as fh:
                    cfg = validate_config(fh.read())
            path = run_scenario(cfg, out_path=args.out)
            print(f"wrote {path}")
            return 0
        if args.command == "presets":
            for name, cfg in sorted(_preset_configs().items(),
                                    key=lambda kv: int(kv[0][3:])):
                curves = ""
                if cfg.curves:
                    curves = " curves=" + ",".join(lbl for lbl, _ in cfg.curves)
                grid = cfg.tau_grid
                params = " ".join(f"{k}={v}" for k, v in sorted(cfg.params.items()))
                print(f"{name}: model={cfg.model} sweep={cfg.sweep} "
                      f"grid=[{grid[0]:g},{grid[1]:g}]x{grid[2]} "
                      f"measures={','.join(cfg.measures)} {params}{curves}")
            return 0
        return run_check()
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"config error: {problem}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, InvalidCovarianceError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 3
    except (ConvergenceError, OracleMismatchError) as exc:
        print(f"convergence/oracle failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
