"""Command-line front end: ber-sweep, se-ee, analyze, papr, validate.

Run configurations are INI files with key = value pairs; unknown sections or
keys are rejected so a typo can never silently change an experiment.  All
randomness flows from the single `master_seed` key.  Results are CSV (default)
or JSON records mirroring the CSV columns, written to --out or stdout, and are
byte-stable for a fixed configuration.

Exit codes: 0 success, 2 config error, 3 validation failure, 4 search failure.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import sys

from .analytics import (
    interference_power,
    receiver_complexity,
    spectral_efficiency,
)
from .channels import ChannelSpec
from .detectors import Detection
from .errors import ConfigError, SearchFailure, UnsupportedModeError, ValidationFailure
from .simkit import BerPointSpec, ber_point, ebn0_for_target, papr_ccdf
from .validation import standard_checks
from .waveforms import ModulationConfig, Scheme

SCHEMA_VERSION = 1

_BER_SWEEP_HEADER = [
    "schema_version", "scheme", "detector", "channel", "M", "L",
    "ebn0_db", "bits_sent", "bit_errors", "ber", "ci95",
]
_SE_EE_HEADER = [
    "schema_version", "scheme", "detector", "lambda", "M", "L", "se", "required_ebn0_db",
]
_PAPR_HEADER = ["schema_version", "scheme", "M", "L", "threshold_db", "exceed_prob"]
_ANALYZE_HEADER = ["schema_version", "table", "scheme", "M", "L", "name", "value", "status"]
_VALIDATE_HEADER = ["schema_version", "check", "value", "tolerance", "status"]


def _fmt_db(x: float) -> str:
    return f"{x:.4f}"


def _fmt_prob(x: float) -> str:
    return f"{x:.6e}"


# ---------------------------------------------------------------- config


def _load_config(path: str) -> configparser.ConfigParser:
    cp = configparser.ConfigParser(interpolation=None, delimiters=("=",))
    loaded = cp.read(path)
    if not loaded:
        raise ConfigError(f"config file not found or unreadable: {path}")
    return cp


def _parse_float_list(text: str) -> list[float]:
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"range must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ConfigError("range step must be positive")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [start + i * step for i in range(n)]
    return [float(p) for p in text.split(",") if p.strip()]


def _parse_int_list(text: str) -> list[int]:
    return [int(p) for p in text.split(",") if p.strip()]


def _parse_detectors(text: str) -> list[Detection]:
    out = []
    for p in text.split(","):
        p = p.strip()
        if not p:
            continue
        try:
            out.append(Detection(p))
        except ValueError:
            raise ConfigError(f"unknown detector {p!r}") from None
    if not out:
        raise ConfigError("empty detector list")
    return out


_PARSERS = {
    "int": int,
    "float": float,
    "complex": complex,
    "str": str,
    "float_list": _parse_float_list,
    "int_list": _parse_int_list,
    "detectors": _parse_detectors,
}


def _read_section(cp, name: str, schema: dict[str, tuple[str, object]], required=()):
    """Parse one section against {key: (type, default)}; unknown keys fail."""
    out = {}
    items = dict(cp.items(name)) if cp.has_section(name) else {}
    for key in items:
        if key not in schema:
            raise ConfigError(f"unknown key {key!r} in section [{name}]")
    for key, (typ, default) in schema.items():
        if key in items:
            try:
                out[key] = _PARSERS[typ](items[key])
            except (ValueError, TypeError) as exc:
                raise ConfigError(f"bad value for {key!r} in [{name}]: {exc}") from None
        else:
            if key in required:
                raise ConfigError(f"missing required key {key!r} in section [{name}]")
            out[key] = default
    return out


def _known_sections(cp, fixed: set[str]):
    schemes = []
    for section in cp.sections():
        if section in fixed:
            continue
        if section.startswith("scheme:"):
            schemes.append(section)
        else:
            raise ConfigError(f"unknown section [{section}]")
    if not schemes:
        raise ConfigError("no [scheme:<name>] sections; nothing to run")
    return schemes


def _parse_scheme_section(cp, section: str, need_m: bool = True):
    name = section.split(":", 1)[1]
    try:
        scheme = Scheme(name)
    except ValueError:
        raise ConfigError(f"unknown scheme {name!r}") from None
    vals = _read_section(
        cp,
        section,
        {
            "m": ("int", None),
            "layers": ("int_list", [1]),
            "detectors": ("detectors", None),
        },
        required=("m",) if need_m else (),
    )
    detectors = vals["detectors"]
    if detectors is None:
        detectors = [Detection.COHERENT] if scheme is Scheme.IQ_TDM_CSS else [
            Detection.COHERENT,
            Detection.NONCOHERENT,
        ]
    if scheme is Scheme.IQ_TDM_CSS and Detection.NONCOHERENT in detectors:
        raise ConfigError("iq_tdm_css has no non-coherent detector")
    layers = vals["layers"] if scheme.is_layered else [1]
    return scheme, vals["m"], layers, detectors


def _parse_run(cp) -> dict:
    run = _read_section(
        cp,
        "run",
        {
            "master_seed": ("int", None),
            "workers": ("int", 1),
            "format": ("str", "csv"),
        },
        required=("master_seed",),
    )
    if run["format"] not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {run['format']!r}")
    if run["workers"] < 1:
        raise ConfigError("workers must be >= 1")
    return run


def _parse_channel(cp) -> ChannelSpec:
    vals = _read_section(
        cp,
        "channel",
        {
            "gain": ("complex", 1.0 + 0.0j),
            "tap_rho": ("float", 0.0),
            "freq_offset": ("float", 0.0),
            "phase_offset": ("float", 0.0),
        },
    )
    try:
        return ChannelSpec(
            gain_h=vals["gain"],
            tap_rho=vals["tap_rho"],
            freq_offset=vals["freq_offset"],
            phase_offset=vals["phase_offset"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _channel_label(ch: ChannelSpec) -> str:
    parts = []
    if ch.tap_rho != 0.0:
        parts.append(f"fading{ch.tap_rho:.4f}")
    if ch.freq_offset != 0.0:
        parts.append(f"fo{ch.freq_offset:.4f}")
    if ch.phase_offset != 0.0:
        parts.append(f"po{ch.phase_offset:.4f}")
    if ch.gain_h != 1.0:
        parts.append(f"gain{ch.gain_h.real:.4f}{ch.gain_h.imag:+.4f}j")
    return "+".join(parts) if parts else "awgn"


# ---------------------------------------------------------------- output


def _emit(rows: list[dict], header: list[str], fmt: str, out_path: str | None) -> None:
    if fmt == "csv":
        lines = [",".join(header)]
        lines += [",".join(str(row[col]) for col in header) for row in rows]
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(rows, sort_keys=True, separators=(",", ":")) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


# ---------------------------------------------------------------- commands


def cmd_ber_sweep(args) -> int:
    cp = _load_config(args.config)
    _known_sections(cp, {"run", "sweep", "channel"})
    run = _parse_run(cp)
    sweep = _read_section(
        cp,
        "sweep",
        {
            "ebn0_db": ("float_list", None),
            "min_bit_errors": ("int", 200),
            "max_symbols": ("int", 10_000_000),
        },
        required=("ebn0_db",),
    )
    channel = _parse_channel(cp)
    workers = args.workers if args.workers else run["workers"]
    rows = []
    point_id = 0
    for section in _known_sections(cp, {"run", "sweep", "channel"}):
        scheme, M, layers_list, detectors = _parse_scheme_section(cp, section)
        for layers in layers_list:
            cfg = ModulationConfig(scheme, M, layers)
            for det in detectors:
                for db in sweep["ebn0_db"]:
                    spec = BerPointSpec(
                        cfg=cfg,
                        detector=det,
                        channel=channel,
                        ebn0_db=db,
                        min_bit_errors=sweep["min_bit_errors"],
                        max_symbols=sweep["max_symbols"],
                        master_seed=run["master_seed"],
                        point_id=point_id,
                        workers=workers,
                    )
                    est = ber_point(spec)
                    rows.append(
                        {
                            "schema_version": SCHEMA_VERSION,
                            "scheme": scheme.value,
                            "detector": det.value,
                            "channel": _channel_label(channel),
                            "M": cfg.M,
                            "L": cfg.layers,
                            "ebn0_db": _fmt_db(db),
                            "bits_sent": est.bits_sent,
                            "bit_errors": est.bit_errors,
                            "ber": _fmt_prob(est.ber),
                            "ci95": _fmt_prob(est.ci95_halfwidth),
                        }
                    )
                    _log(
                        f"ber-sweep {scheme.value}/{det.value} L={cfg.layers} "
                        f"{db:.2f} dB: ber={est.ber:.3e} ({est.symbols_sent} symbols)"
                    )
                    point_id += 1
    _emit(rows, _BER_SWEEP_HEADER, args.format or run["format"], args.out)
    return 0


def cmd_se_ee(args) -> int:
    cp = _load_config(args.config)
    scheme_sections = _known_sections(cp, {"run", "search", "channel"})
    run = _parse_run(cp)
    search = _read_section(
        cp,
        "search",
        {
            "lambdas": ("int_list", [10]),
            "target_ber": ("float", 1e-3),
            "tol_db": ("float", 0.1),
            "lo_db": ("float", -10.0),
            "hi_db": ("float", 40.0),
            "min_bit_errors": ("int", 200),
        },
    )
    channel = _parse_channel(cp)
    workers = args.workers if args.workers else run["workers"]
    rows = []
    point_id = 0
    for section in scheme_sections:
        scheme, _, layers_list, detectors = _parse_scheme_section(cp, section, need_m=False)
        for lam in search["lambdas"]:
            M = 1 << lam
            for layers in layers_list:
                cfg = ModulationConfig(scheme, M, layers)
                for det in detectors:
                    spec = BerPointSpec(
                        cfg=cfg,
                        detector=det,
                        channel=channel,
                        ebn0_db=0.0,
                        min_bit_errors=search["min_bit_errors"],
                        master_seed=run["master_seed"],
                        point_id=point_id,
                        workers=workers,
                    )
                    required = ebn0_for_target(
                        spec,
                        target_ber=search["target_ber"],
                        tol_db=search["tol_db"],
                        lo_db=search["lo_db"],
                        hi_db=search["hi_db"],
                    )
                    rows.append(
                        {
                            "schema_version": SCHEMA_VERSION,
                            "scheme": scheme.value,
                            "detector": det.value,
                            "lambda": lam,
                            "M": M,
                            "L": cfg.layers,
                            "se": _fmt_prob(spectral_efficiency(cfg)),
                            "required_ebn0_db": _fmt_db(required),
                        }
                    )
                    _log(
                        f"se-ee {scheme.value}/{det.value} lambda={lam} L={cfg.layers}: "
                        f"{required:.3f} dB"
                    )
                    point_id += 1
    _emit(rows, _SE_EE_HEADER, args.format or run["format"], args.out)
    return 0


def cmd_papr(args) -> int:
    cp = _load_config(args.config)
    scheme_sections = _known_sections(cp, {"run", "papr"})
    run = _parse_run(cp)
    papr_cfg = _read_section(
        cp,
        "papr",
        {
            "thresholds_db": ("float_list", None),
            "n_symbols": ("int", 20_000),
        },
        required=("thresholds_db",),
    )
    rows = []
    stream_id = 0
    for section in scheme_sections:
        scheme, M, layers_list, _ = _parse_scheme_section(cp, section)
        for layers in layers_list:
            cfg = ModulationConfig(scheme, M, layers)
            curve = papr_ccdf(
                cfg,
                papr_cfg["n_symbols"],
                papr_cfg["thresholds_db"],
                seed=run["master_seed"] + stream_id,
            )
            for t, p in zip(curve.thresholds_db, curve.exceed_prob):
                rows.append(
                    {
                        "schema_version": SCHEMA_VERSION,
                        "scheme": scheme.value,
                        "M": cfg.M,
                        "L": cfg.layers,
                        "threshold_db": _fmt_db(t),
                        "exceed_prob": _fmt_prob(p),
                    }
                )
            _log(f"papr {scheme.value} M={M} L={cfg.layers}: {papr_cfg['n_symbols']} symbols")
            stream_id += 1
    _emit(rows, _PAPR_HEADER, args.format or run["format"], args.out)
    return 0


def cmd_analyze(args) -> int:
    cp = _load_config(args.config)
    run = _parse_run(cp)
    opts = _read_section(
        cp,
        "analyze",
        {
            "table_lambda": ("int", 10),
            "lcss_layers": ("int_list", [8]),
            "ldmcss_layers": ("int_list", [4]),
            "interference_samples": ("int", 100_000),
            "random_cases": ("int", 2_000),
        },
    )
    for section in cp.sections():
        if section not in ("run", "analyze"):
            raise ConfigError(f"unknown section [{section}]")
    M = 1 << opts["table_lambda"]
    table_cfgs = [
        ModulationConfig(Scheme.LORA, M),
        ModulationConfig(Scheme.TDM_CSS, M),
        ModulationConfig(Scheme.IQ_TDM_CSS, M),
        ModulationConfig(Scheme.DM_TDM_CSS, M),
    ]
    table_cfgs += [ModulationConfig(Scheme.LCSS, M, l) for l in opts["lcss_layers"]]
    table_cfgs += [ModulationConfig(Scheme.LDMCSS, M, l) for l in opts["ldmcss_layers"]]

    rows = []

    def add(table, scheme, m, layers, name, value, status="-"):
        rows.append(
            {
                "schema_version": SCHEMA_VERSION,
                "table": table,
                "scheme": scheme,
                "M": m,
                "L": layers,
                "name": name,
                "value": value,
                "status": status,
            }
        )

    for cfg in table_cfgs:
        add("se", cfg.scheme.value, cfg.M, cfg.layers, "se_bits_per_s_per_hz",
            _fmt_prob(spectral_efficiency(cfg)))
    for cfg in table_cfgs:
        add("complexity", cfg.scheme.value, cfg.M, cfg.layers, "receiver_ops",
            receiver_complexity(cfg))
    for cfg in table_cfgs:
        value = interference_power(cfg, opts["interference_samples"], seed=run["master_seed"])
        add("interference", cfg.scheme.value, cfg.M, cfg.layers, "interference_i",
            _fmt_prob(value))
        _log(f"analyze interference {cfg.scheme.value} L={cfg.layers}: {value:.3e}")

    failed = False
    for check in standard_checks(run["master_seed"], opts["random_cases"]):
        if check.info_only:
            status = "info"
        else:
            status = "pass" if check.passed else "fail"
            failed = failed or not check.passed
        add("validation", "-", 0, 0, check.name, _fmt_prob(check.value), status)
    _emit(rows, _ANALYZE_HEADER, args.format or run["format"], args.out)
    if failed:
        raise ValidationFailure("one or more oracle residuals exceeded tolerance")
    return 0


def cmd_validate(args) -> int:
    rows = []
    failed = []
    for check in standard_checks(args.seed, args.random_cases):
        status = "info" if check.info_only else ("pass" if check.passed else "fail")
        if not check.info_only and not check.passed:
            failed.append(check.name)
        rows.append(
            {
                "schema_version": SCHEMA_VERSION,
                "check": check.name,
                "value": _fmt_prob(check.value),
                "tolerance": "inf" if math.isinf(check.tolerance) else _fmt_prob(check.tolerance),
                "status": status,
            }
        )
        _log(f"validate {check.name}: {rows[-1]['status']} ({check.value:.3e})")
    _emit(rows, _VALIDATE_HEADER, args.format or "csv", args.out)
    if failed:
        raise ValidationFailure("failed checks: " + ", ".join(failed))
    return 0


# ---------------------------------------------------------------- entry


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chirpmodem",
        description="Layered chirp-spread-spectrum modem simulations and analytics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, workers=False):
        p.add_argument("--config", required=True, help="INI run configuration")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default=None)
        if workers:
            p.add_argument("--workers", type=int, default=None,
                           help="override the workers key from the config")

    p = sub.add_parser("ber-sweep", help="Monte Carlo BER over an E_b/N_0 grid")
    common(p, workers=True)
    p.set_defaults(func=cmd_ber_sweep)

    p = sub.add_parser("se-ee", help="required E_b/N_0 at a target BER per scheme")
    common(p, workers=True)
    p.set_defaults(func=cmd_se_ee)

    p = sub.add_parser("papr", help="PAPR CCDF curves")
    common(p)
    p.set_defaults(func=cmd_papr)

    p = sub.add_parser("analyze", help="SE/complexity/interference tables plus oracle residuals")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("validate", help="run the full oracle suite")
    p.add_argument("--seed", type=int, required=True, help="master seed for randomized checks")
    p.add_argument("--random-cases", type=int, default=2000)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        _log(f"config error: {exc}")
        return 2
    except UnsupportedModeError as exc:
        _log(f"config error: {exc}")
        return 2
    except ValidationFailure as exc:
        _log(f"validation failure: {exc}")
        return 3
    except SearchFailure as exc:
        _log(f"search failure: {exc}")
        return 4


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
