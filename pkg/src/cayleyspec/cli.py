"""Command-line front end.

Commands consume a JSON job config describing a group, a connection
(set, layers, or an explicit color), and options; results are emitted as
deterministic JSON (fixed key order, floats rounded to 15 significant
digits, LF newlines) or CSV.  Exit codes: 0 success, 2 verification
failure, 3 hypothesis violation, 4 malformed config or unsupported request.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

import numpy as np

from . import cayley, groups, irreps, spectra, verify
from .errors import (
    CapacityExceeded,
    CayleyError,
    ConfigError,
    DimensionMismatch,
    HypothesesViolated,
    InvalidAction,
    IrrepValidationFailed,
    IrrepsUnavailable,
    LayerNotInvariant,
    NotClassFunction,
)

EXIT_OK = 0
EXIT_VERIFICATION = 2
EXIT_HYPOTHESES = 3
EXIT_CONFIG = 4

METHODS = ("normal", "split", "metacyclic", "blocks")


def _round15(x: float) -> float:
    return float(f"{float(x):.15g}") + 0.0


def _pair(z: complex) -> list:
    z = complex(z)
    return [_round15(z.real), _round15(z.imag)]


def _encode_element(g):
    if isinstance(g, tuple):
        return list(g)
    return g


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(payload, output: Optional[str]) -> None:
    _emit(json.dumps(payload, indent=2) + "\n", output)


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw = handle.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        config = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from None
    if not isinstance(config, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return config


class Job:
    """A parsed config: group, color, connection data, options."""

    def __init__(self, config: dict):
        if "group" not in config:
            raise ConfigError("config needs a 'group' section")
        self.group = groups.construct_group(config["group"])
        self.connection_mode, self.color, self.subset, self.layers = (
            self._parse_connection(config)
        )
        self.options = self._parse_options(config.get("options", {}))
        self.user_irreps = None
        if "irreps" in config:
            self.user_irreps = _parse_irrep_tables(self.group, config["irreps"])

    def _parse_connection(self, config):
        if "connection" not in config:
            raise ConfigError("config needs a 'connection' section")
        conn = config["connection"]
        if not isinstance(conn, dict):
            raise ConfigError("'connection' must be an object")
        mode = conn.get("mode")
        if mode not in ("set", "layers", "color"):
            raise ConfigError(
                f"connection.mode must be 'set', 'layers', or 'color', got {mode!r}"
            )
        payload_keys = {"set": "elements", "layers": "layers", "color": "entries"}
        extra = set(conn) - {"mode", payload_keys[mode]}
        if extra:
            raise ConfigError(
                f"connection has stray keys {sorted(extra)} for mode {mode!r}"
            )
        key = payload_keys[mode]
        if key not in conn:
            raise ConfigError(f"connection mode {mode!r} needs field {key!r}")
        if mode == "set":
            raw = conn["elements"]
            if not isinstance(raw, list):
                raise ConfigError("connection.elements must be a list")
            subset = []
            for idx, entry in enumerate(raw):
                try:
                    subset.append(self.group.coerce_element(entry))
                except ConfigError as exc:
                    raise ConfigError(f"connection.elements[{idx}]: {exc}") from None
            subset = sorted(set(subset), key=self.group.index)
            color = cayley.color_from_set(self.group, subset)
            return mode, color, subset, None
        if mode == "layers":
            if not isinstance(self.group, groups.MetacyclicGroup):
                raise ConfigError(
                    "connection mode 'layers' needs a metacyclic group, got "
                    f"{self.group.kind!r}"
                )
            raw = conn["layers"]
            if (not isinstance(raw, list)
                    or any(not isinstance(layer, list) for layer in raw)):
                raise ConfigError("connection.layers must be a list of lists")
            if len(raw) != self.group.l:
                raise ConfigError(
                    f"connection.layers needs {self.group.l} layers, got {len(raw)}"
                )
            layers = []
            for t, layer in enumerate(raw):
                for s in layer:
                    if not isinstance(s, int) or isinstance(s, bool):
                        raise ConfigError(
                            f"connection.layers[{t}] holds a non-integer {s!r}"
                        )
                layers.append(sorted({s % self.group.m for s in layer}))
            subset = [
                (t, s) for t, layer in enumerate(layers) for s in layer
            ]
            subset = sorted(subset, key=self.group.index)
            color = cayley.color_from_set(self.group, subset)
            return mode, color, subset, layers
        # explicit color entries
        raw = conn["entries"]
        if not isinstance(raw, list):
            raise ConfigError("connection.entries must be a list")
        values = {}
        for idx, entry in enumerate(raw):
            if (not isinstance(entry, dict)
                    or "element" not in entry or "value" not in entry):
                raise ConfigError(
                    f"connection.entries[{idx}] needs 'element' and 'value'"
                )
            try:
                g = self.group.coerce_element(entry["element"])
            except ConfigError as exc:
                raise ConfigError(f"connection.entries[{idx}].element: {exc}") from None
            value = entry["value"]
            if (not isinstance(value, list) or len(value) != 2
                    or any(isinstance(x, bool) or not isinstance(x, (int, float))
                           for x in value)):
                raise ConfigError(
                    f"connection.entries[{idx}].value must be [re, im]"
                )
            if g in values:
                raise ConfigError(
                    f"connection.entries[{idx}] repeats element {entry['element']!r}"
                )
            values[g] = complex(value[0], value[1])
        color = cayley.ColorFunction(self.group, values)
        return mode, color, sorted(values, key=self.group.index), None

    @staticmethod
    def _parse_options(raw) -> dict:
        if not isinstance(raw, dict):
            raise ConfigError("'options' must be an object")
        options = {
            "eigenvectors": True,
            "verify": False,
            "tolerance": 1e-9,
            "format": "json",
            "export_graph": None,
        }
        for key, value in raw.items():
            if key not in options:
                raise ConfigError(f"unknown option {key!r}")
            options[key] = value
        if not isinstance(options["eigenvectors"], bool):
            raise ConfigError("options.eigenvectors must be a boolean")
        if not isinstance(options["verify"], bool):
            raise ConfigError("options.verify must be a boolean")
        tol = options["tolerance"]
        if isinstance(tol, bool) or not isinstance(tol, (int, float)) or tol <= 0:
            raise ConfigError("options.tolerance must be a positive number")
        options["tolerance"] = float(tol)
        if options["format"] not in ("json", "csv"):
            raise ConfigError("options.format must be 'json' or 'csv'")
        return options


def _parse_irrep_tables(group, raw) -> irreps.IrrepSet:
    if not isinstance(raw, list) or not raw:
        raise ConfigError("'irreps' must be a non-empty list of tables")
    elems = group.elements()
    built = []
    for idx, table in enumerate(raw):
        if not isinstance(table, dict):
            raise ConfigError(f"irreps[{idx}] must be an object")
        label = table.get("label")
        degree = table.get("degree")
        matrices = table.get("matrices")
        if not isinstance(label, str):
            raise ConfigError(f"irreps[{idx}].label must be a string")
        if not isinstance(degree, int) or isinstance(degree, bool) or degree < 1:
            raise ConfigError(f"irreps[{idx}].degree must be a positive integer")
        if not isinstance(matrices, dict):
            raise ConfigError(
                f"irreps[{idx}].matrices must map element indices to entries"
            )
        mats = {}
        for key, flat in matrices.items():
            try:
                position = int(key)
            except ValueError:
                raise ConfigError(
                    f"irreps[{idx}].matrices key {key!r} is not an element index"
                ) from None
            if not 0 <= position < len(elems):
                raise ConfigError(
                    f"irreps[{idx}].matrices index {position} out of range"
                )
            if (not isinstance(flat, list) or len(flat) != degree * degree
                    or any(not isinstance(pair, list) or len(pair) != 2
                           for pair in flat)):
                raise ConfigError(
                    f"irreps[{idx}].matrices[{key}] must hold {degree * degree} "
                    "[re, im] pairs in row-major order"
                )
            data = np.array(
                [complex(pair[0], pair[1]) for pair in flat], dtype=complex
            ).reshape(degree, degree)
            mats[elems[position]] = data
        if len(mats) != len(elems):
            raise ConfigError(
                f"irreps[{idx}].matrices covers {len(mats)} of {len(elems)} elements"
            )
        built.append(irreps.UnitaryIrrep(label, mats))
    table_set = irreps.IrrepSet(group, built, trusted=False)
    irreps.validate_irrep_set(group, table_set).raise_if_failed()
    return table_set


def _choose_method(job: Job, requested: Optional[str]) -> str:
    if requested:
        if requested not in METHODS:
            raise ConfigError(
                f"unknown method {requested!r}; expected one of {METHODS}"
            )
        return requested
    if job.connection_mode == "layers":
        return "metacyclic"
    group = job.group
    if group.kind in ("metacyclic", "semidirect"):
        return "split"
    if group.kind == "dihedral":
        return "normal" if job.color.is_class_function else "split"
    if job.color.is_class_function:
        return "normal"
    raise ConfigError(
        f"no applicable spectrum method for group kind {group.kind!r} with a "
        "non-class color function"
    )


def _normal_irreps(job: Job) -> irreps.IrrepSet:
    if job.user_irreps is not None:
        return job.user_irreps
    return irreps.builtin_irreps(job.group)


def _compute_spectrum(job: Job, method: str, eigenvectors: bool) -> spectra.Spectrum:
    group = job.group
    if method == "metacyclic":
        if not isinstance(group, groups.MetacyclicGroup):
            raise ConfigError(
                f"method 'metacyclic' needs a metacyclic group, got {group.kind!r}"
            )
        layers = job.layers
        if layers is None:
            # layered formula applies to indicator colors only
            for g, value in job.color.items():
                if value != 1:
                    raise ConfigError(
                        "method 'metacyclic' needs an indicator color; "
                        f"alpha({list(g)!r}) = {value}"
                    )
            layers = cayley.layers_from_set(group, job.color.support())
        return spectra.spectrum_metacyclic(
            group.m, group.l, group.r, layers, eigenvectors=eigenvectors
        )
    if method == "split":
        if not isinstance(group, groups.SplitExtensionGroup):
            raise ConfigError(
                f"method 'split' needs a split extension, got {group.kind!r}"
            )
        irreps_h = irreps.builtin_irreps(group.h_group)
        irreps_k = irreps.irreps_cyclic(group.m)
        return spectra.spectrum_split(
            group, job.color, irreps_h, irreps_k, eigenvectors=eigenvectors
        )
    if method == "normal":
        return spectra.spectrum_normal(
            group, job.color, _normal_irreps(job), eigenvectors=eigenvectors
        )
    # blocks
    irrep_set = _normal_irreps(job)
    decomposition = spectra.block_diagonalize(group, job.color, irrep_set)
    lines = []
    for u_idx, (rho, eigs) in enumerate(
            zip(irrep_set, decomposition.block_eigenvalues)):
        if eigs is None:
            raise ConfigError(
                f"method 'blocks' cannot extract eigenvalues of the degree-"
                f"{rho.degree} block {rho.label!r} in closed form"
            )
        for v_idx, value in enumerate(eigs):
            lines.append(spectra.SpectralLine(
                u=u_idx,
                v=v_idx,
                labels=(rho.label,),
                eigenvalue=complex(value),
                multiplicity=rho.degree,
            ))
    return spectra.Spectrum(n=group.order, method="blocks", lines=lines)


def _spectrum_payload(spectrum: spectra.Spectrum, include_vectors: bool,
                      verification=None) -> dict:
    lines = []
    for line in spectrum.lines:
        entry = {
            "u": line.u,
            "v": line.v,
            "eigenvalue": _pair(line.eigenvalue),
            "multiplicity": line.multiplicity,
        }
        if include_vectors and line.eigenvectors is not None:
            entry["eigenvectors"] = [
                [_pair(z) for z in row] for row in line.eigenvectors
            ]
        lines.append(entry)
    payload = {
        "n": spectrum.n,
        "method": spectrum.method,
        "lines": lines,
        "multiset": [
            [_round15(value.real), _round15(value.imag), count]
            for value, count in spectrum.multiset()
        ],
    }
    if not spectrum.theorem_verified:
        payload["unverified_by_theorem"] = True
    if verification is not None:
        payload["verification"] = _verification_payload(verification)
    return payload


def _verification_payload(report: verify.VerificationReport) -> dict:
    payload = {
        "tolerance": _round15(report.tolerance),
        "scale": _round15(report.scale),
        "max_residual": _round15(report.max_residual),
        "per_line_residuals": [_round15(r) for r in report.per_line_residuals],
        "gram_deviation": _round15(report.gram_deviation),
        "vector_count": report.vector_count,
        "complete": report.complete,
        "trace_deviation": _round15(report.trace_deviation),
        "trace_sq_deviation": _round15(report.trace_sq_deviation),
        "passed": report.passed,
    }
    return payload


def _spectrum_csv(spectrum: spectra.Spectrum) -> str:
    rows = ["u,v,re,im,multiplicity"]
    for line in spectrum.lines:
        v = "" if line.v is None else str(line.v)
        rows.append(
            f"{line.u},{v},{line.eigenvalue.real:.15g},"
            f"{line.eigenvalue.imag:.15g},{line.multiplicity}"
        )
    return "\n".join(rows) + "\n"


def _witness_payload(witness) -> Optional[dict]:
    if witness is None:
        return None
    return {
        "triple": [_encode_element(g) for g in witness.triple],
        "lhs_element": _encode_element(witness.lhs_element),
        "rhs_element": _encode_element(witness.rhs_element),
        "lhs_value": _pair(witness.lhs_value),
        "rhs_value": _pair(witness.rhs_value),
    }


def _run_spectrum_job(args, force_verify: bool) -> int:
    job = Job(_load_config(args.config))
    method = _choose_method(job, args.method)
    do_verify = force_verify or job.options["verify"]
    eigenvectors = job.options["eigenvectors"] or do_verify
    if method == "blocks" and do_verify:
        raise ConfigError(
            "method 'blocks' produces no eigenvectors and cannot be verified; "
            "use another method"
        )
    spectrum = _compute_spectrum(job, method, eigenvectors)
    verification = None
    if do_verify:
        tol = job.options["tolerance"]
        if getattr(args, "edges", None):
            matrix = cayley.read_edge_list(args.edges, job.group.order)
            adjacency = cayley.AdjacencyMatrix(
                matrix=matrix, ordering=tuple(job.group.elements())
            )
        else:
            adjacency = cayley.adjacency_matrix(job.group, job.color)
        verification = verify.certify(adjacency, spectrum, job.color, tol=tol)
    export_path = job.options["export_graph"]
    if export_path:
        adjacency = cayley.adjacency_matrix(job.group, job.color)
        cayley.export_edge_list(adjacency, export_path)
    fmt = job.options["format"]
    if getattr(args, "format", None):
        fmt = args.format
    if fmt == "csv":
        _emit(_spectrum_csv(spectrum), args.output)
    else:
        payload = _spectrum_payload(
            spectrum, job.options["eigenvectors"], verification
        )
        _emit_json(payload, args.output)
    if verification is not None and not verification.passed:
        return EXIT_VERIFICATION
    return EXIT_OK


def _cmd_spectrum(args) -> int:
    return _run_spectrum_job(args, force_verify=False)


def _cmd_verify(args) -> int:
    return _run_spectrum_job(args, force_verify=True)


def _cmd_describe(args) -> int:
    job = Job(_load_config(args.config))
    group = job.group
    try:
        degrees = irreps.builtin_irreps(group).degrees()
    except (IrrepsUnavailable, CayleyError):
        degrees = None
    split = None
    if isinstance(group, groups.SplitExtensionGroup):
        split = {"m": group.m, "l": group.l}
    subset = job.subset or []
    classification = cayley.classify_connection_set(group, subset) if subset else None
    payload = {
        "kind": group.kind,
        "order": group.order,
        "class_sizes": [cls.size for cls in group.conjugacy_classes()],
        "irrep_degrees": degrees,
        "split": split,
        "connection": None if classification is None else {
            "size": len(classification),
            "inverse_closed": classification.inverse_closed,
            "contains_identity": classification.contains_identity,
            "generates": classification.generates,
            "closure_size": classification.closure_size,
            "conjugation_closed": classification.conjugation_closed,
        },
    }
    _emit_json(payload, args.output)
    return EXIT_OK


def _cmd_check_hypotheses(args) -> int:
    job = Job(_load_config(args.config))
    report = spectra.check_split_hypotheses(job.group, job.color)
    payload = {
        "condition_a": report.condition_a,
        "condition_b": report.condition_b,
        "witness_a": _witness_payload(report.witness_a),
        "witness_b": _witness_payload(report.witness_b),
        "passed": report.passed,
    }
    _emit_json(payload, args.output)
    return EXIT_OK if report.passed else EXIT_HYPOTHESES


def _cmd_family(args) -> int:
    group, connection = cayley.nonnormal_family(args.m, args.l, args.r)
    layers = cayley.layers_from_set(group, connection.elements)
    payload = {
        "group": {"type": "metacyclic", "m": args.m, "l": args.l, "r": args.r},
        "connection": {"mode": "layers", "layers": layers},
        "options": {"verify": True},
    }
    _emit_json(payload, args.output)
    return EXIT_OK


def _cmd_export_graph(args) -> int:
    job = Job(_load_config(args.config))
    adjacency = cayley.adjacency_matrix(job.group, job.color)
    cayley.export_edge_list(adjacency, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cayleyspec",
        description="Exact spectra of Cayley color graphs with certification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, **kwargs):
        cmd = sub.add_parser(name, **kwargs)
        cmd.set_defaults(handler=handler)
        return cmd

    describe = add("describe", _cmd_describe, help="summarize a config's group")
    spectrum = add("spectrum", _cmd_spectrum, help="compute a labeled spectrum")
    verify_cmd = add("verify", _cmd_verify,
                     help="compute a spectrum and certify it against the adjacency")
    check = add("check-hypotheses", _cmd_check_hypotheses,
                help="test the split-formula invariance conditions")
    family = add("family", _cmd_family,
                 help="emit the non-normal layered family config")
    export = add("export-graph", _cmd_export_graph,
                 help="write the colored edge list")

    for cmd in (describe, spectrum, verify_cmd, check, export):
        cmd.add_argument("--config", required=True, help="path to the job JSON")
    for cmd in (describe, spectrum, verify_cmd, check, family):
        cmd.add_argument("--output", default=None,
                         help="write the result here instead of stdout")
    for cmd in (spectrum, verify_cmd):
        cmd.add_argument("--method", default=None, choices=METHODS,
                         help="override the automatic formula selection")
        cmd.add_argument("--format", default=None, choices=("json", "csv"),
                         help="override the output format")
    verify_cmd.add_argument("--edges", default=None,
                            help="certify against a previously exported edge list")
    family.add_argument("--m", type=int, required=True)
    family.add_argument("--l", type=int, required=True)
    family.add_argument("--r", type=int, required=True)
    export.add_argument("--out", required=True, help="edge list destination")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except HypothesesViolated as exc:
        report = exc.report
        sys.stderr.write(f"error: {exc}\n")
        for name, witness in (("A", report.witness_a), ("B", report.witness_b)):
            if witness is not None:
                sys.stderr.write(
                    f"condition {name} witness: triple={witness.triple!r} "
                    f"values {witness.lhs_value} != {witness.rhs_value}\n"
                )
        return EXIT_HYPOTHESES
    except (ConfigError, InvalidAction, CapacityExceeded, NotClassFunction,
            LayerNotInvariant, IrrepValidationFailed, IrrepsUnavailable,
            DimensionMismatch) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
