"""Plain-text file formats.

Matrix text format (representations, dense-oracle dumps): one matrix row per
line, entries whitespace separated, each written ``re+imi`` (e.g. ``0+1i``,
``-0.5-2e-3i``).  Several matrices in one file are separated by blank lines;
lines starting with ``#`` are comments.  A representation file holds alpha0,
alpha1 and optionally alpha2, in that order.
"""
from __future__ import annotations

import csv
import json
import os
from pathlib import Path
from typing import Iterable

import numpy as np

from .clifford import CliffordRep
from .spectral import DispersionCurve


def format_complex(z: complex) -> str:
    z = complex(z)
    return f"{z.real!r}{'+' if z.imag >= 0 or np.isnan(z.imag) else '-'}{abs(z.imag)!r}i"


def parse_complex(token: str) -> complex:
    if not token.endswith("i") or "j" in token or token[:-1].endswith(("+", "-")) or len(token) < 2:
        raise ValueError(f"malformed complex entry {token!r}; expected re+imi")
    try:
        return complex(token[:-1] + "j")
    except ValueError:
        raise ValueError(f"malformed complex entry {token!r}; expected re+imi") from None


def parse_matrices(text: str) -> list[np.ndarray]:
    blocks, rows = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#"):
            continue
        if not line:
            if rows:
                blocks.append(rows)
                rows = []
            continue
        try:
            rows.append([parse_complex(t) for t in line.split()])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if rows:
        blocks.append(rows)
    out = []
    for b in blocks:
        if len({len(r) for r in b}) != 1:
            raise ValueError("ragged matrix rows")
        out.append(np.array(b, dtype=complex))
    return out


def format_matrix(m: np.ndarray) -> str:
    return "\n".join(" ".join(format_complex(z) for z in row) for row in np.asarray(m)) + "\n"


def write_matrices(path, matrices: Iterable[np.ndarray], header: str = "") -> Path:
    path = Path(path)
    parts = [f"# {line}\n" for line in header.splitlines()] if header else []
    parts.append("\n".join(format_matrix(m) for m in matrices))
    path.write_text("".join(parts))
    return path


def read_representation(path) -> CliffordRep:
    path = Path(path)
    mats = parse_matrices(path.read_text())
    if len(mats) not in (2, 3):
        raise ValueError(f"{path}: expected 2 or 3 matrices (alpha0, alpha1[, alpha2]), found {len(mats)}")
    return CliffordRep(*mats, label=path.stem) if len(mats) == 3 else CliffordRep(mats[0], mats[1], label=path.stem)


def write_representation(rep: CliffordRep, path) -> Path:
    return write_matrices(path, rep.matrices(), header=f"Clifford representation {rep.label}: alpha0, alpha1[, alpha2]")


# --- CSV ------------------------------------------------------------------

def _num(x) -> str:
    return repr(float(x))


def params_row(curve: DispersionCurve) -> list[str]:
    p = curve.params
    lam = curve.model.lam if curve.model.kind == "DQW" else ""
    return [curve.model.name, _num(p.epsilon), _num(p.mass), _num(p.wilson_r), _num(p.rho), str(lam)]


def write_dispersion_csv(curve: DispersionCurve, path) -> Path:
    """Header ``model,epsilon,m,r,rho,lambda`` + values, then ``k,F,f`` rows."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["model", "epsilon", "m", "r", "rho", "lambda"])
        w.writerow(params_row(curve))
        w.writerow(["k", "F", "f"])
        for k, F, f in zip(curve.k_grid, curve.F_values, curve.f_values):
            w.writerow([_num(k), _num(F), _num(f)])
    return path


def read_dispersion_csv(path) -> dict:
    with Path(path).open() as fh:
        rows = list(csv.reader(fh))
    meta = dict(zip(rows[0], rows[1]))
    data = np.array([[float(x) for x in r] for r in rows[3:]])
    meta.update(k=data[:, 0], F=data[:, 1], f=data[:, 2])
    return meta


def write_combined_csv(curves: list[DispersionCurve], path, names=None) -> Path:
    """One ``k`` column followed by one gapless-frequency column per model."""
    path = Path(path)
    k = curves[0].k_grid
    for c in curves[1:]:
        if not np.array_equal(c.k_grid, k):
            raise ValueError("combined CSV needs a common k grid")
    names = [c.model.name.lower() for c in curves] if names is None else names
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["k", *names])
        for i, kk in enumerate(k):
            w.writerow([_num(kk), *(_num(c.f_values[i]) for c in curves)])
    return path


def write_trajectory_csv(traj, path) -> Path:
    """Columns: step, site, re_c0..re_c{d-1}, im_c0..im_c{d-1}, prob."""
    path = Path(path)
    d = traj.states[0].dim
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["step", "site", *(f"re_c{c}" for c in range(d)), *(f"im_c{c}" for c in range(d)), "prob"])
        for state in traj.states:
            a = state.amplitudes
            prob = np.sum(np.abs(a) ** 2, axis=1)
            for p in range(state.sites):
                w.writerow([state.step_index, p, *(_num(x) for x in a[p].real), *(_num(x) for x in a[p].imag), _num(prob[p])])
    return path


def write_manifest(directory, entries: list[dict], extra: dict | None = None) -> Path:
    """manifest.json listing outputs in order with their parameters."""
    directory = Path(directory)
    doc = {"outputs": entries}
    if extra:
        doc.update(extra)
    path = directory / "manifest.json"
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path


def emit_csv(items: list, directory, stem_names: list[str] | None = None, extra: dict | None = None) -> list[Path]:
    """Write each DispersionCurve or Trajectory to CSV plus a manifest.

    Returns the written paths, manifest last.
    """
    from .dynamics import Trajectory

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths, entries = [], []
    for i, item in enumerate(items):
        stem = stem_names[i] if stem_names else None
        if isinstance(item, DispersionCurve):
            name = f"{stem or item.model.name.lower()}.csv"
            paths.append(write_dispersion_csv(item, directory / name))
            p = item.params
            entries.append({"file": name, "kind": "dispersion", "model": item.model.name,
                            "epsilon": p.epsilon, "m": p.mass, "r": p.wilson_r, "rho": p.rho,
                            "lambda": item.model.lam, "grid_points": int(len(item.k_grid))})
        elif isinstance(item, Trajectory):
            name = f"{stem or 'trajectory'}.csv"
            paths.append(write_trajectory_csv(item, directory / name))
            p = item.params
            entries.append({"file": name, "kind": "trajectory", "scheme": item.scheme.value,
                            "epsilon": p.epsilon, "m": p.mass, "r": p.wilson_r, "rho": p.rho,
                            "lambda": p.lam, "variant": p.variant.value,
                            "sites": item.states[0].sites, "steps": item.steps})
        else:
            raise TypeError(f"cannot emit {type(item).__name__}")
    paths.append(write_manifest(directory, entries, extra))
    return paths


def ensure_writable(directory) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    if not os.access(directory, os.W_OK):
        raise OSError(f"output directory {directory} is not writable")
    return directory
