"""Text file formats.

Everything is plain decimal text with 17 significant digits so runs are
reproducible bit-for-bit across platforms. Each format starts with a header
line naming the fields it records.
"""
from __future__ import annotations

import numpy as np

from .errors import DomainError
from .experiment import FieldGrid, SweetSpotMetrics
from .geometry import ArrayGeometry, ProlateParams, RigidSphere
from .spherical import SphericalCoeffs
from .spheroidal import SpheroidalCoeffs

G = "%.17g"


def _fmt(x: float) -> str:
    return G % x


# ---------------------------------------------------------------------------
# coefficients
# ---------------------------------------------------------------------------

def save_spherical_coeffs(path: str, coeffs: SphericalCoeffs) -> None:
    """Records (n, m, Re, Im), deterministically ordered by n^2 + n + m."""
    with open(path, "w") as fh:
        fh.write(f"# spherical coefficients N={coeffs.order} k={_fmt(coeffs.k)} "
                 f"frame={coeffs.frame}\n")
        for n in range(coeffs.order + 1):
            for m in range(-n, n + 1):
                v = coeffs.at(n, m)
                fh.write(f"{n} {m} {_fmt(v.real)} {_fmt(v.imag)}\n")


def load_spherical_coeffs(path: str) -> SphericalCoeffs:
    with open(path) as fh:
        header = fh.readline()
        if "spherical coefficients" not in header:
            raise DomainError(f"{path} is not a spherical coefficient file")
        meta = dict(kv.split("=") for kv in header.split() if "=" in kv)
        order = int(meta["N"])
        k = float(meta["k"])
        values = np.zeros((order + 1) ** 2, dtype=complex)
        for line in fh:
            n_s, m_s, re_s, im_s = line.split()
            n, m = int(n_s), int(m_s)
            values[SphericalCoeffs.index(n, m)] = float(re_s) + 1j * float(im_s)
    return SphericalCoeffs(order=order, k=k, values=values, frame=meta.get("frame", "global"))


def save_spheroidal_coeffs(path: str, coeffs: SpheroidalCoeffs) -> None:
    """Records (kind, m, n, Re, Im) with kind A (cosine) or B (sine)."""
    with open(path, "w") as fh:
        fh.write(f"# spheroidal coefficients N={coeffs.order} c={_fmt(coeffs.c)} "
                 f"a={_fmt(coeffs.a_focal)} frame={coeffs.frame}\n")
        for n in range(coeffs.order + 1):
            for m in range(n + 1):
                v = coeffs.at_a(m, n)
                fh.write(f"A {m} {n} {_fmt(v.real)} {_fmt(v.imag)}\n")
        for n in range(1, coeffs.order + 1):
            for m in range(1, n + 1):
                v = coeffs.at_b(m, n)
                fh.write(f"B {m} {n} {_fmt(v.real)} {_fmt(v.imag)}\n")


def load_spheroidal_coeffs(path: str) -> SpheroidalCoeffs:
    with open(path) as fh:
        header = fh.readline()
        if "spheroidal coefficients" not in header:
            raise DomainError(f"{path} is not a spheroidal coefficient file")
        meta = dict(kv.split("=") for kv in header.split() if "=" in kv)
        order = int(meta["N"])
        a = np.zeros((order + 1) * (order + 2) // 2, dtype=complex)
        b = np.zeros(order * (order + 1) // 2, dtype=complex)
        for line in fh:
            kind, m_s, n_s, re_s, im_s = line.split()
            m, n = int(m_s), int(n_s)
            val = float(re_s) + 1j * float(im_s)
            if kind == "A":
                a[SpheroidalCoeffs.index_a(m, n)] = val
            elif kind == "B":
                b[SpheroidalCoeffs.index_b(m, n)] = val
            else:
                raise DomainError(f"unknown coefficient kind {kind!r} in {path}")
    return SpheroidalCoeffs(order=order, c=float(meta["c"]), a_focal=float(meta["a"]),
                            a=a, b=b, frame=meta.get("frame", "local"))


# ---------------------------------------------------------------------------
# microphone data
# ---------------------------------------------------------------------------

def save_pressures(path: str, values, k: float, label: str = "pressures") -> None:
    """Complex microphone pressures, one record (q, Re, Im) per line."""
    values = np.asarray(values, dtype=complex)
    with open(path, "w") as fh:
        fh.write(f"# {label} Q={len(values)} k={_fmt(k)}\n")
        for q, v in enumerate(values):
            fh.write(f"{q} {_fmt(v.real)} {_fmt(v.imag)}\n")


def load_pressures(path: str):
    with open(path) as fh:
        header = fh.readline()
        meta = dict(kv.split("=") for kv in header.split() if "=" in kv)
        count = int(meta["Q"])
        values = np.zeros(count, dtype=complex)
        for line in fh:
            q_s, re_s, im_s = line.split()
            values[int(q_s)] = float(re_s) + 1j * float(im_s)
    return values, float(meta["k"])


def save_geometry(path: str, geom: ArrayGeometry) -> None:
    """Baffle header plus records (index, x, y, z, native_1, native_2)."""
    baffle = geom.baffle
    with open(path, "w") as fh:
        if isinstance(baffle, RigidSphere):
            fh.write(f"# baffle sphere R={_fmt(baffle.radius)} Q={geom.count}\n")
        elif isinstance(baffle, ProlateParams):
            fh.write(f"# baffle prolate-spheroid a={_fmt(baffle.a)} xi1={_fmt(baffle.xi1)} "
                     f"Q={geom.count}\n")
        else:
            raise DomainError(f"unsupported baffle {type(baffle).__name__}")
        for q in range(geom.count):
            x, y, z = geom.positions[q]
            u, v = geom.native[q]
            fh.write(f"{q} {_fmt(x)} {_fmt(y)} {_fmt(z)} {_fmt(u)} {_fmt(v)}\n")


# ---------------------------------------------------------------------------
# field grids and metrics
# ---------------------------------------------------------------------------

def _grid_header(xs, ys, k, frame):
    return (f"nx={len(xs)} ny={len(ys)} x_min={_fmt(xs[0])} x_max={_fmt(xs[-1])} "
            f"y_min={_fmt(ys[0])} y_max={_fmt(ys[-1])} k={_fmt(k)} frame={frame}")


def save_pressure_grid(path: str, xs, ys, k: float, values, frame: str = "global") -> None:
    """Single complex field on the grid: rows (x, y, Re, Im)."""
    values = np.asarray(values, dtype=complex)
    with open(path, "w") as fh:
        fh.write(f"# pressure grid {_grid_header(xs, ys, k, frame)}\n")
        i = 0
        for x in xs:
            for y in ys:
                v = values[i]
                fh.write(f"{_fmt(x)} {_fmt(y)} {_fmt(v.real)} {_fmt(v.imag)}\n")
                i += 1


def load_pressure_grid(path: str):
    with open(path) as fh:
        header = fh.readline()
        meta = dict(kv.split("=") for kv in header.split() if "=" in kv)
        nx, ny = int(meta["nx"]), int(meta["ny"])
        values = np.zeros(nx * ny, dtype=complex)
        xs = np.zeros(nx)
        ys = np.zeros(ny)
        for i, line in enumerate(fh):
            x_s, y_s, re_s, im_s = line.split()
            xs[i // ny] = float(x_s)
            ys[i % ny] = float(y_s)
            values[i] = float(re_s) + 1j * float(im_s)
    return xs, ys, float(meta["k"]), values, meta.get("frame", "global")


def save_field_grid(path: str, grid: FieldGrid) -> None:
    """Full evaluation record: rows (x, y, Re/Im truth, Re/Im recon, SDR dB)."""
    with open(path, "w") as fh:
        fh.write(f"# field grid {_grid_header(grid.xs, grid.ys, grid.k, grid.frame)}\n")
        i = 0
        for x in grid.xs:
            for y in grid.ys:
                t = grid.p_true[i]
                r = grid.p_rec[i]
                fh.write(f"{_fmt(x)} {_fmt(y)} {_fmt(t.real)} {_fmt(t.imag)} "
                         f"{_fmt(r.real)} {_fmt(r.imag)} {_fmt(grid.sdr_db[i])}\n")
                i += 1


def load_field_grid_arrays(path: str):
    """Columns of a field-grid file as arrays (for checks and plotting)."""
    data = np.loadtxt(path, skiprows=1)
    return data


def save_metrics(path: str, records: list[tuple[str, str, SweetSpotMetrics]]) -> None:
    """One structured line per (case, pipeline): sweet-spot widths and area."""
    with open(path, "w") as fh:
        fh.write("# sweet-spot metrics\n")
        for case, pipeline, m in records:
            fh.write(
                f"case={case} pipeline={pipeline} threshold_db={_fmt(m.threshold_db)} "
                f"width_x_m={_fmt(m.width_x)} width_y_m={_fmt(m.width_y)} "
                f"area_m2={_fmt(m.area_m2)} sdr_origin_db={_fmt(m.sdr_origin_db)}\n"
            )


def load_metrics(path: str) -> list[dict]:
    out = []
    with open(path) as fh:
        for line in fh:
            if line.startswith("#"):
                continue
            rec = dict(kv.split("=") for kv in line.split())
            out.append(rec)
    return out


def write_plot_script(path: str, case: str, truth_file: str, hoa_file: str,
                      pshoa_file: str, threshold_db: float) -> None:
    """gnuplot script rendering the pressure maps and SDR sweet spots."""
    text = f"""# gnuplot script for case {case}
# run: gnuplot -p {case}_plots.gp
set size square
set xlabel 'x [m]'
set ylabel 'y [m]'
set pm3d map
set palette defined (0 'blue', 0.5 'white', 1 'red')

set terminal pngcairo size 1500,1000
set output '{case}_fields.png'
set multiplot layout 2,3 title 'case {case}'
set title 'ground truth Re p'
set cbrange [-1.5:1.5]
splot '{truth_file}' skip 1 using 1:2:3 with pm3d notitle
set title 'HOA reconstruction Re p'
splot '{hoa_file}' skip 1 using 1:2:5 with pm3d notitle
set title 'ps-HOA reconstruction Re p'
splot '{pshoa_file}' skip 1 using 1:2:5 with pm3d notitle
set title 'HOA SDR [dB], sweet spot above {threshold_db:g} dB'
set cbrange [0:60]
splot '{hoa_file}' skip 1 using 1:2:7 with pm3d notitle
set title 'ps-HOA SDR [dB], sweet spot above {threshold_db:g} dB'
splot '{pshoa_file}' skip 1 using 1:2:7 with pm3d notitle
unset multiplot
"""
    with open(path, "w") as fh:
        fh.write(text)
