"""Manifest files: TOML fixtures describing a chart, metric, structure,
named frames and a soliton candidate.

Layout (see fixtures/ for complete examples)::

    [manifold]
    dim = 3
    coords = ["x", "y", "z"]
    params = ["p"]

    [metric]
    matrix = [["(y^2-1)/4", "0", "y/4"], ...]   # row-major, entry [i][j] = g_ij

    [structure]          # optional
    phi = [[...], ...]   # phi[i][j] = component i of phi(d_j)
    xi = ["0", "0", "2"]
    eta = ["y/2", "0", "1/2"]

    [frame]              # optional, named frames
    e = [["0", "2", "0"], ...]

    [soliton]            # optional
    V = ["x", "y", "2*z"]
    f = "x^2/2 + y^2/2 + z^2"
    p = "p"
    # lambda = "...", mu = "..."  (optional given constants)

All expressions use the exact grammar of :mod:`parasol.symexpr`; loading
never introduces floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .symexpr import Expr, ExprError, ExprSyntaxError, SymbolTable, parse_expr
from .geometry import (
    Chart,
    GeometryError,
    Metric,
    TensorField,
    metric_from_matrix,
    endomorphism,
    one_form,
    vector_field,
)
from .paracontact import ParacontactStructure
from .soliton import SolitonError, SolitonProblem

__all__ = ["Manifest", "SolitonBlock", "ManifestError", "load_manifest"]


class ManifestError(Exception):
    """Any defect in a manifest file: I/O, syntax, shape or symbol errors."""


@dataclass(frozen=True)
class SolitonBlock:
    v: TensorField | None
    f: Expr | None
    p: Expr
    lam: Expr | None
    mu: Expr | None


@dataclass(frozen=True)
class Manifest:
    name: str
    chart: Chart
    table: SymbolTable
    metric: Metric
    structure: ParacontactStructure | None
    frames: Mapping[str, tuple[TensorField, ...]]
    soliton: SolitonBlock | None

    def soliton_problem(self, lam: Expr | None = None, mu: Expr | None = None) -> SolitonProblem:
        """Build the solver input, optionally overriding the given constants."""
        if self.soliton is None:
            raise ManifestError("manifest has no [soliton] block")
        if self.structure is None:
            raise ManifestError("a soliton problem needs the [structure] block")
        block = self.soliton
        try:
            return SolitonProblem(
                structure=self.structure,
                v=block.v,
                f=block.f,
                p=block.p,
                lam=lam if lam is not None else block.lam,
                mu=mu if mu is not None else block.mu,
            )
        except (SolitonError, GeometryError) as exc:
            raise ManifestError(str(exc)) from exc


def _require(table: Mapping[str, Any], key: str, where: str) -> Any:
    if key not in table:
        raise ManifestError(f"missing key '{key}' in [{where}]")
    return table[key]


def _check_keys(table: Mapping[str, Any], allowed: set[str], where: str) -> None:
    unknown = set(table) - allowed
    if unknown:
        raise ManifestError(f"unknown key(s) in [{where}]: {', '.join(sorted(unknown))}")


def _string_list(value: Any, where: str, length: int | None = None) -> list[str]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise ManifestError(f"{where} must be a list of strings")
    if length is not None and len(value) != length:
        raise ManifestError(f"{where} must have length {length}, got {len(value)}")
    return value


def _string_matrix(value: Any, where: str, rows: int, cols: int) -> list[list[str]]:
    if not isinstance(value, list) or len(value) != rows:
        raise ManifestError(f"{where} must be a {rows}x{cols} matrix, "
                            f"got {len(value) if isinstance(value, list) else type(value).__name__} rows")
    return [_string_list(row, f"{where} row {i}", cols) for i, row in enumerate(value)]


class _Loader:
    def __init__(self, data: Mapping[str, Any], name: str):
        self.data = data
        self.name = name
        self.table: SymbolTable | None = None

    def parse(self, text: Any, where: str) -> Expr:
        if not isinstance(text, str):
            raise ManifestError(f"{where} must be an expression string")
        try:
            return parse_expr(text, self.table)
        except ExprSyntaxError as exc:
            raise ManifestError(f"{where}: {exc}") from exc

    def load(self) -> Manifest:
        _check_keys(self.data, {"manifold", "metric", "structure", "frame", "soliton"},
                    "top level")
        chart = self._manifold()
        self.table = chart.table
        metric = self._metric(chart)
        structure = self._structure(chart, metric)
        frames = self._frames(chart)
        soliton = self._soliton(chart)
        return Manifest(self.name, chart, self.table, metric, structure, frames, soliton)

    def _manifold(self) -> Chart:
        block = _require(self.data, "manifold", "top level")
        _check_keys(block, {"dim", "coords", "params"}, "manifold")
        dim = _require(block, "dim", "manifold")
        if not isinstance(dim, int) or dim <= 0:
            raise ManifestError("[manifold] dim must be a positive integer")
        coords = _string_list(_require(block, "coords", "manifold"), "[manifold] coords", dim)
        params = _string_list(block.get("params", []), "[manifold] params")
        try:
            return Chart.build(coords, params)
        except (GeometryError, ExprError) as exc:
            raise ManifestError(f"[manifold]: {exc}") from exc

    def _metric(self, chart: Chart) -> Metric:
        block = _require(self.data, "metric", "top level")
        _check_keys(block, {"matrix"}, "metric")
        raw = _string_matrix(_require(block, "matrix", "metric"),
                             "[metric] matrix", chart.dim, chart.dim)
        entries = [[self.parse(raw[i][j], f"[metric] matrix[{i}][{j}]")
                    for j in range(chart.dim)] for i in range(chart.dim)]
        for i in range(chart.dim):
            for j in range(i + 1, chart.dim):
                if entries[i][j] != entries[j][i]:
                    raise ManifestError(
                        f"[metric] matrix is not symmetric at ({i},{j})")
        try:
            return metric_from_matrix(chart, entries)
        except GeometryError as exc:
            raise ManifestError(f"[metric]: {exc}") from exc

    def _structure(self, chart: Chart, metric: Metric) -> ParacontactStructure | None:
        block = self.data.get("structure")
        if block is None:
            return None
        _check_keys(block, {"phi", "xi", "eta"}, "structure")
        phi_raw = _string_matrix(_require(block, "phi", "structure"),
                                 "[structure] phi", chart.dim, chart.dim)
        xi_raw = _string_list(_require(block, "xi", "structure"), "[structure] xi", chart.dim)
        eta_raw = _string_list(_require(block, "eta", "structure"), "[structure] eta", chart.dim)
        phi = endomorphism(chart, [[self.parse(phi_raw[i][j], f"[structure] phi[{i}][{j}]")
                                    for j in range(chart.dim)] for i in range(chart.dim)])
        xi = vector_field(chart, [self.parse(v, f"[structure] xi[{i}]")
                                  for i, v in enumerate(xi_raw)])
        eta = one_form(chart, [self.parse(v, f"[structure] eta[{i}]")
                               for i, v in enumerate(eta_raw)])
        try:
            return ParacontactStructure(chart=chart, phi=phi, xi=xi, eta=eta, g=metric)
        except GeometryError as exc:
            raise ManifestError(f"[structure]: {exc}") from exc

    def _frames(self, chart: Chart) -> dict[str, tuple[TensorField, ...]]:
        block = self.data.get("frame")
        if block is None:
            return {}
        frames = {}
        for name, raw in block.items():
            rows = _string_matrix(raw, f"[frame] {name}", chart.dim, chart.dim)
            vectors = tuple(
                vector_field(chart, [self.parse(rows[a][i], f"[frame] {name}[{a}][{i}]")
                                     for i in range(chart.dim)])
                for a in range(chart.dim))
            frames[name] = vectors
        return frames

    def _soliton(self, chart: Chart) -> SolitonBlock | None:
        block = self.data.get("soliton")
        if block is None:
            return None
        _check_keys(block, {"V", "f", "p", "lambda", "mu"}, "soliton")
        v = None
        if "V" in block:
            raw = _string_list(block["V"], "[soliton] V", chart.dim)
            v = vector_field(chart, [self.parse(c, f"[soliton] V[{i}]")
                                     for i, c in enumerate(raw)])
        f = self.parse(block["f"], "[soliton] f") if "f" in block else None
        if v is None and f is None:
            raise ManifestError("[soliton] needs V or f (or both)")
        p = self.parse(_require(block, "p", "soliton"), "[soliton] p")
        if p.depends_on(chart.coords):
            raise ManifestError("[soliton] p must not involve coordinates")
        lam = self.parse(block["lambda"], "[soliton] lambda") if "lambda" in block else None
        mu = self.parse(block["mu"], "[soliton] mu") if "mu" in block else None
        return SolitonBlock(v, f, p, lam, mu)


def load_manifest(path: str | Path) -> Manifest:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ManifestError(f"cannot read {path}: {exc}") from exc
    try:
        data = tomllib.loads(raw.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise ManifestError(f"{path} is not valid UTF-8: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ManifestError(f"{path}: {exc}") from exc
    return _Loader(data, path.stem).load()
