"""Dataset manifests, the per-image error metric, evaluation and training."""
import csv
import io
import logging
import os
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

import numpy as np

from .config import MorphologyConfig, SolverConfig
from .image import as_mask, load_grayscale, load_mask
from .segmentation import segment

log = logging.getLogger(__name__)

SPLITS = ("train", "test")
REPORT_FIELDS = ("db", "n_images", "mean_err_pct", "median_err_pct", "max_err_pct", "failures")
PER_IMAGE_FIELDS = ("path", "err", "m_f", "m_b", "ms")


class ManifestError(ValueError):
    pass


@dataclass(frozen=True)
class ManifestEntry:
    image: Path
    mask: Path
    split: str


@dataclass
class DatasetManifest:
    name: str
    entries: list

    def split(self, which):
        return [e for e in self.entries if e.split == which]

    @property
    def counts(self):
        return {s: len(self.split(s)) for s in SPLITS}


def load_manifest(path, name=None):
    """Read ``image_path,mask_path,split`` rows; relative paths resolve against the CSV."""
    path = Path(path)
    base = path.parent
    entries = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(row for row in fh if not row.lstrip().startswith("#"))
        missing = {"image_path", "mask_path", "split"} - set(reader.fieldnames or ())
        if missing:
            raise ManifestError(f"{path}: missing column(s) {sorted(missing)}")
        for lineno, row in enumerate(reader, 2):
            split = row["split"].strip()
            if split not in SPLITS:
                raise ManifestError(f"{path}:{lineno}: split must be train or test, got {split!r}")
            image = (base / row["image_path"].strip()).resolve()
            mask = (base / row["mask_path"].strip()).resolve()
            for p in (image, mask):
                if not p.exists():
                    raise ManifestError(f"{path}:{lineno}: file not found: {p}")
            entries.append(ManifestEntry(image, mask, split))
    return DatasetManifest(name or path.stem, entries)


def write_manifest(path, entries):
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["image_path", "mask_path", "split"])
        for e in entries:
            writer.writerow([os.path.relpath(e.image, path.parent), os.path.relpath(e.mask, path.parent), e.split])


def segmentation_error(estimated, truth):
    """Return ``(err, m_f, m_b)``: missed foreground and missed background over all pixels."""
    est = as_mask(estimated, "estimated").astype(bool)
    gt = as_mask(truth, "truth").astype(bool)
    if est.shape != gt.shape:
        raise ValueError(f"mask shapes differ: {est.shape} vs {gt.shape}")
    m_f = int(np.count_nonzero(gt & ~est))
    m_b = int(np.count_nonzero(~gt & est))
    return (m_f + m_b) / gt.size, m_f, m_b


@dataclass
class ImageResult:
    path: str
    err: float = float("nan")
    m_f: int = 0
    m_b: int = 0
    ms: float = 0.0
    error: str = ""


@dataclass
class EvalReport:
    name: str
    split: str
    results: list = field(default_factory=list)
    solver: SolverConfig = None
    morphology: MorphologyConfig = None
    seconds: float = 0.0

    @property
    def ok(self):
        return [r for r in self.results if not r.error]

    @property
    def failures(self):
        return len(self.results) - len(self.ok)

    @property
    def mean_err_pct(self):
        """Mean per-image error in percent; ``None`` when no image succeeded."""
        ok = self.ok
        if not ok:
            return None
        return 100.0 * sum(r.err for r in ok) / len(ok)

    @property
    def median_err_pct(self):
        ok = self.ok
        return 100.0 * statistics.median(r.err for r in ok) if ok else None

    @property
    def max_err_pct(self):
        ok = self.ok
        return 100.0 * max(r.err for r in ok) if ok else None

    def summary_row(self):
        def pct(x):
            return "" if x is None else f"{x:.4f}"

        return [
            self.name,
            len(self.results),
            pct(self.mean_err_pct),
            pct(self.median_err_pct),
            pct(self.max_err_pct),
            self.failures,
        ]

    def per_image_csv(self, timing=True):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(PER_IMAGE_FIELDS)
        for r in self.results:
            if r.error:
                writer.writerow([r.path, "", "", "", ""])
            else:
                writer.writerow([r.path, repr(r.err), r.m_f, r.m_b, f"{r.ms:.1f}" if timing else ""])
        return buf.getvalue()


def _run_one(args):
    entry, solver_cfg, morph_cfg = args
    start = time.perf_counter()
    try:
        img = load_grayscale(entry.image)
        truth = load_mask(entry.mask)
        frac = float(truth.mean())
        if not 0.05 <= frac <= 0.95:
            log.warning(
                "%s: ground-truth foreground fraction %.3f; is 255 the foreground value?",
                entry.mask,
                frac,
            )
        mask = segment(img, solver_cfg, morph_cfg).mask
        err, m_f, m_b = segmentation_error(mask, truth)
        return ImageResult(str(entry.image), err, m_f, m_b, 1e3 * (time.perf_counter() - start))
    except Exception as exc:  # recorded per image, never fatal
        return ImageResult(str(entry.image), error=f"{type(exc).__name__}: {exc}")


def worker_count():
    raw = os.environ.get("G3PD_THREADS", "")
    if raw.strip():
        return max(1, int(raw))
    return max(1, len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else os.cpu_count() or 1)


def evaluate(manifest, split, solver_cfg=None, morph_cfg=None, workers=None, progress=None):
    """Segment every image of ``split`` and score it; rows follow manifest order."""
    solver_cfg = solver_cfg or SolverConfig(iterations=4)
    morph_cfg = morph_cfg or MorphologyConfig()
    entries = manifest.split(split)
    workers = worker_count() if workers is None else workers
    start = time.perf_counter()
    jobs = [(e, solver_cfg, morph_cfg) for e in entries]
    if workers <= 1 or len(jobs) <= 1:
        results = []
        for job in jobs:
            results.append(_run_one(job))
            if progress:
                progress(results[-1])
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = []
            for r in pool.map(_run_one, jobs):
                results.append(r)
                if progress:
                    progress(r)
    report = EvalReport(manifest.name, split, results, solver_cfg, morph_cfg)
    report.seconds = time.perf_counter() - start
    if not entries:
        log.warning("%s: no %s entries; mean error undefined", manifest.name, split)
    return report


@dataclass
class TrainResult:
    C: float
    beta2: float
    mean_err_pct: float
    surface: list  # (phase, C, beta2, mean_err_pct)

    def surface_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["phase", "C", "beta2", "mean_err_pct"])
        for phase, c, b2, e in self.surface:
            writer.writerow([phase, repr(c), repr(b2), "" if e is None else repr(e)])
        return buf.getvalue()


def _argmin(points):
    # smallest error, ties to the smaller parameter value
    return min(points, key=lambda kv: (np.inf if kv[1] is None else kv[1], kv[0]))


def train_grid(manifest, grid_C, grid_beta2, base_cfg=None, morph_cfg=None, full=False, evaluator=None):
    """Pick (C, beta2) minimizing mean train error.

    By default a two-phase coordinate search: sweep C at the base beta2, fix
    the best C, then sweep beta2 over its grid. The returned point is always a
    grid point and minimizes the second phase. With ``full=True`` the whole
    grid is evaluated instead.
    """
    base_cfg = base_cfg or SolverConfig(iterations=4)
    grid_C = sorted(set(float(c) for c in grid_C))
    grid_beta2 = sorted(set(float(b) for b in grid_beta2))
    if not grid_C or not grid_beta2:
        raise ValueError("grids must be non-empty")
    if not manifest.split("train"):
        raise ValueError(f"{manifest.name}: empty training split")
    evaluator = evaluator or (
        lambda cfg: evaluate(manifest, "train", cfg, morph_cfg).mean_err_pct
    )
    cache = {}

    def score(c, b2):
        key = (c, b2)
        if key not in cache:
            cache[key] = evaluator(replace(base_cfg, C=c, beta2=b2))
        return cache[key]

    surface = []
    if full:
        for c in grid_C:
            for b2 in grid_beta2:
                surface.append(("full", c, b2, score(c, b2)))
        best = min(surface, key=lambda s: (np.inf if s[3] is None else s[3], s[1], s[2]))
        return TrainResult(best[1], best[2], best[3], surface)

    b0 = float(base_cfg.beta2)
    phase1 = []
    for c in grid_C:
        e = score(c, b0)
        surface.append(("C", c, b0, e))
        phase1.append((c, e))
    best_c, _ = _argmin(phase1)
    phase2 = []
    for b2 in grid_beta2:
        e = score(best_c, b2)
        surface.append(("beta2", best_c, b2, e))
        phase2.append((b2, e))
    best_b2, best_e = _argmin(phase2)
    return TrainResult(best_c, best_b2, best_e, surface)


def _read_data_csv(name):
    text = resources.files("g3pd.data").joinpath(name).read_text(encoding="utf-8")
    rows = [line for line in text.splitlines() if line and not line.startswith("#")]
    return list(csv.DictReader(rows))


def published_errors():
    """Published per-database mean errors (%) keyed by database name, incl. ``Avg``."""
    out = {}
    for row in _read_data_csv("published_errors.csv"):
        db = row.pop("db")
        out[db] = {k: v for k, v in row.items()}
    return out


def published_parameters(db):
    """Solver config with the published trained (C, beta2) for database ``db``."""
    for row in _read_data_csv("trained_params.csv"):
        if row["db"] == db:
            return SolverConfig(iterations=4, C=float(row["C"]), beta2=float(row["beta2"]))
    raise KeyError(db)


def report_table(reports, baselines=None):
    """Render ``(text, csv)``.

    The CSV holds one summary row per report. The text table adds the
    published numbers for each database row, echoed as stored, and an Avg row.
    """
    baselines = published_errors() if baselines is None else baselines
    methods = list(next(iter(baselines.values())).keys()) if baselines else []

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_FIELDS)
    for r in reports:
        writer.writerow(r.summary_row())

    header = ["db", "n", "measured"] + methods
    rows = []
    for r in reports:
        mean = r.mean_err_pct
        published = baselines.get(r.name, {})
        rows.append(
            [r.name, str(len(r.results)), "-" if mean is None else f"{mean:.2f}"]
            + [published.get(m, "-") for m in methods]
        )
    if reports:
        means = [r.mean_err_pct for r in reports if r.mean_err_pct is not None]
        avg = f"{sum(means) / len(means):.2f}" if means else "-"
        pub = baselines.get("Avg", {})
        rows.append(["Avg", "", avg] + [pub.get(m, "-") for m in methods])
    return _format_rows(header, rows), buf.getvalue()


def published_table(baselines=None):
    """Text rendering of the stored published numbers alone."""
    baselines = published_errors() if baselines is None else baselines
    methods = list(next(iter(baselines.values())).keys())
    rows = [[db] + [vals[m] for m in methods] for db, vals in baselines.items()]
    return _format_rows(["db"] + methods, rows)


def _format_rows(header, rows):
    widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)] if rows else [len(h) for h in header]
    lines = ["  ".join(str(h).rjust(w) for h, w in zip(header, widths))]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(str(x).rjust(w) for x, w in zip(row, widths)))
    return "\n".join(lines) + "\n"
