"""Procedural synthetic face data: identities, attribute edits, rendering, manifests.

A synthetic person is a 16-component parameter vector derived
deterministically from an integer seed. Attribute edits move that vector
along named unit directions with a scalar intensity (``alpha``); the
rasterizer then maps parameters to drawable geometry and paints the face.
Datasets are described by a JSON manifest; images live on disk as PNG or are
rendered lazily from the manifest alone.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from . import _kernels
from .errors import ComfaceError, ConfigurationError
from .rngs import rng_for

LATENT_DIM = 16
BASE_RANGE = 2.0    # identity parameters are sampled in [-BASE_RANGE, BASE_RANGE]
LEGAL_RANGE = 8.0   # render-time clamp; +/-5 edits on top of the base range never reach it

PARAM_NAMES = (
    "face_width", "face_height", "eye_spacing", "eye_size", "nose_size",
    "mouth_curve", "mouth_width", "brow_height", "brow_tilt", "skin_tone",
    "wrinkle_amp", "hue_shift", "eye_height", "mouth_height", "bg_shade",
    "texture_freq",
)

# per-slot drawable ranges; a parameter at -LEGAL_RANGE maps to lo, at +LEGAL_RANGE to hi
GEOM_BOUNDS = np.array([
    (0.55, 0.92),    # face_width: half-width of the head ellipse
    (0.62, 0.95),    # face_height
    (0.22, 0.42),    # eye_spacing: horizontal eye offset from center
    (0.05, 0.11),    # eye_size
    (0.04, 0.13),    # nose_size: half-width at the nose base
    (-0.22, 0.22),   # mouth_curve: positive = corners up
    (0.16, 0.38),    # mouth_width
    (0.16, 0.30),    # brow_height above eye centers
    (-0.14, 0.14),   # brow_tilt: positive = outer ends droop
    (0.38, 0.78),    # skin_tone: base luminance
    (0.02, 0.42),    # wrinkle_amp: texture-noise darkening amplitude
    (-0.10, 0.10),   # hue_shift: warm/cool skin balance
    (-0.38, -0.14),  # eye_height (negative = upper half of the frame)
    (0.26, 0.46),    # mouth_height
    (0.70, 0.95),    # bg_shade
    (2.5, 7.0),      # texture_freq: noise frequency
], dtype=np.float64)

MANIFEST_VERSION = "1"
MANIFEST_FILENAME = "manifest.json"
LAYOUT_TEMPLATE = "identities/{seed}/{attr}/{alpha_millis}.png"

# paper-scale composition of the setup this lab miniaturizes; recorded as
# manifest metadata only, never generated
REFERENCE_SCALE = {"identities": 250_000, "attributes": 43, "total_images": 35_000_000}


@dataclass(frozen=True)
class IdentityLatent:
    """Base parameters of one synthetic person; pure function of the seed."""

    seed: int
    params: np.ndarray

    def __post_init__(self):
        if self.seed < 0:
            raise ConfigurationError("identity seed must be unsigned")


@dataclass(frozen=True)
class AttributeDirection:
    """Named unit direction in parameter space."""

    name: str
    direction: np.ndarray

    def __post_init__(self):
        n = float(np.linalg.norm(self.direction))
        if abs(n - 1.0) > 1e-9:
            raise ConfigurationError(f"direction {self.name!r} is not unit norm ({n})")


@dataclass(frozen=True)
class EditSpec:
    """One (identity, attribute, intensity) triple addressing a single image."""

    identity_seed: int
    attribute: str
    alpha: float

    @property
    def alpha_millis(self) -> int:
        return alpha_to_millis(self.alpha)


@dataclass(frozen=True)
class RenderedFace:
    pixels: np.ndarray  # H x W x 3 float32 in [0, 1]
    spec: EditSpec


def _unit(components: dict[str, float]) -> np.ndarray:
    vec = np.zeros(LATENT_DIM)
    for name, weight in components.items():
        vec[PARAM_NAMES.index(name)] = weight
    return vec / np.linalg.norm(vec)


def default_catalog() -> tuple[AttributeDirection, ...]:
    """The built-in 8-attribute catalog.

    weight widens the face oval, age raises wrinkle density while drooping
    the brows, smile curves the mouth; the remaining five move one geometric
    or tonal slot each.
    """
    inv = 1.0 / np.sqrt(2.0)
    specs = {
        "weight": {"face_width": 1.0},
        "age": {"wrinkle_amp": inv, "brow_tilt": inv},
        "smile": {"mouth_curve": 1.0},
        "eye_size": {"eye_size": 1.0},
        "nose_size": {"nose_size": 1.0},
        "brow_height": {"brow_height": 1.0},
        "skin_tone": {"skin_tone": 1.0},
        "face_length": {"face_height": 1.0},
    }
    return tuple(AttributeDirection(name, _unit(c)) for name, c in specs.items())


def catalog_by_name(names=None) -> dict[str, AttributeDirection]:
    cat = {a.name: a for a in default_catalog()}
    if names is None:
        return cat
    missing = [n for n in names if n not in cat]
    if missing:
        raise ConfigurationError(f"unknown attribute(s): {missing}; known: {sorted(cat)}")
    return {n: cat[n] for n in names}


def alpha_to_millis(alpha: float) -> int:
    return int(round(float(alpha) * 1000.0))


def millis_to_alpha(millis: int) -> float:
    return millis / 1000.0


def build_alpha_grid(alpha_min: float, alpha_max: float, step: float) -> list[int]:
    """Intensity grid as integer thousandths, inclusive of both ends."""
    lo, hi, st = alpha_to_millis(alpha_min), alpha_to_millis(alpha_max), alpha_to_millis(step)
    if st <= 0 or hi <= lo:
        raise ConfigurationError("alpha grid needs step > 0 and max > min")
    if (hi - lo) % st != 0:
        raise ConfigurationError("alpha grid step must divide the range exactly")
    return list(range(lo, hi + st, st))


def sample_identity(seed: int, dim: int = LATENT_DIM) -> IdentityLatent:
    """Deterministic base parameters for one synthetic person."""
    if dim != LATENT_DIM:
        raise ConfigurationError(f"catalog directions are {LATENT_DIM}-dimensional, got dim={dim}")
    params = rng_for(seed, "identity-params").uniform(-BASE_RANGE, BASE_RANGE, dim)
    return IdentityLatent(seed=int(seed), params=params)


def edit(latent: IdentityLatent, attr: AttributeDirection, alpha: float) -> np.ndarray:
    """Edited parameter vector ``params + alpha * direction`` (exact, unclamped)."""
    if latent.params.shape != attr.direction.shape:
        raise ConfigurationError(
            f"dimension mismatch: params {latent.params.shape} vs direction {attr.direction.shape}")
    if not -5.0 - 1e-9 <= float(alpha) <= 5.0 + 1e-9:
        raise ConfigurationError(f"alpha {alpha} outside [-5, 5]")
    return latent.params + float(alpha) * attr.direction


def _geometry(params: np.ndarray) -> np.ndarray:
    p = np.clip(np.asarray(params, dtype=np.float64), -LEGAL_RANGE, LEGAL_RANGE)
    lo = GEOM_BOUNDS[:, 0]
    hi = GEOM_BOUNDS[:, 1]
    mid = 0.5 * (lo + hi)
    return mid + (p / LEGAL_RANGE) * 0.5 * (hi - lo)


def render(params: np.ndarray, size: int, texture_seed: int) -> np.ndarray:
    """Rasterize a parameter vector to an H x W x 3 float32 grid in [0, 1].

    Clamping to the drawable range happens here, never on the vector itself,
    so the edit algebra stays exact.
    """
    if not np.all(np.isfinite(params)):
        raise ConfigurationError("params must be finite")
    geom = _geometry(params)
    term = _kernels.seed_term(int(texture_seed))
    return _kernels.render_geometry(geom, int(size), term)


def render_spec(spec: EditSpec, size: int,
                catalog: dict[str, AttributeDirection] | None = None) -> RenderedFace:
    """Render one manifest entry; the person's texture follows their seed."""
    cat = catalog or catalog_by_name()
    if spec.attribute not in cat:
        raise ConfigurationError(f"attribute {spec.attribute!r} not in catalog")
    latent = sample_identity(spec.identity_seed)
    params = edit(latent, cat[spec.attribute], spec.alpha)
    return RenderedFace(pixels=render(params, size, spec.identity_seed), spec=spec)


@dataclass(frozen=True)
class DatasetManifest:
    """Everything needed to address (and lazily regenerate) a dataset."""

    version: str
    render_size: int
    attribute_catalog: tuple[str, ...]
    identities: tuple[int, ...]
    alpha_grid_millis: tuple[int, ...]
    lazy: bool
    layout_template: str = LAYOUT_TEMPLATE
    reference_scale: dict = field(default_factory=lambda: dict(REFERENCE_SCALE))

    @property
    def alpha_grid(self) -> list[float]:
        return [millis_to_alpha(m) for m in self.alpha_grid_millis]

    @property
    def num_entries(self) -> int:
        return len(self.identities) * len(self.attribute_catalog) * len(self.alpha_grid_millis)

    def has(self, seed: int, attr: str, alpha_millis: int) -> bool:
        return (seed in set(self.identities) and attr in self.attribute_catalog
                and alpha_millis in set(self.alpha_grid_millis))

    def path_for(self, seed: int, attr: str, alpha_millis: int) -> str:
        return self.layout_template.format(seed=seed, attr=attr, alpha_millis=alpha_millis)

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "render_size": self.render_size,
            "attribute_catalog": list(self.attribute_catalog),
            "identities": list(self.identities),
            "alpha_grid": self.alpha_grid,
            "alpha_grid_millis": list(self.alpha_grid_millis),
            "lazy": self.lazy,
            "file_layout": {"template": self.layout_template},
            "reference_scale": self.reference_scale,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DatasetManifest":
        return cls(
            version=d["version"],
            render_size=int(d["render_size"]),
            attribute_catalog=tuple(d["attribute_catalog"]),
            identities=tuple(int(s) for s in d["identities"]),
            alpha_grid_millis=tuple(int(m) for m in d["alpha_grid_millis"]),
            lazy=bool(d["lazy"]),
            layout_template=d["file_layout"]["template"],
            reference_scale=dict(d.get("reference_scale", REFERENCE_SCALE)),
        )

    def save(self, path: Path) -> None:
        path = Path(path)
        path.write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n",
                        encoding="utf-8")

    @classmethod
    def load(cls, path) -> "DatasetManifest":
        path = Path(path)
        if path.is_dir():
            path = path / MANIFEST_FILENAME
        if not path.exists():
            raise ConfigurationError(f"no dataset manifest at {path}")
        return cls.from_dict(json.loads(path.read_text(encoding="utf-8")))


@dataclass(frozen=True)
class GenerationConfig:
    identities: int = 500
    attributes: tuple[str, ...] = tuple(a.name for a in default_catalog())
    alpha_min: float = -5.0
    alpha_max: float = 5.0
    grid_step: float = 0.1
    render_size: int = 64
    seed: int = 0
    lazy: bool = True
    latent_dim: int = LATENT_DIM


def identity_seeds(config: GenerationConfig) -> list[int]:
    """Identity seeds for a generation config; offset by the dataset seed so
    different dataset seeds draw disjoint populations."""
    base = int(config.seed) * 1_000_003
    return [base + i for i in range(config.identities)]


def save_png(pixels: np.ndarray, path: Path) -> None:
    arr = np.clip(np.round(np.asarray(pixels, dtype=np.float64) * 255.0), 0, 255).astype(np.uint8)
    Image.fromarray(arr, mode="RGB").save(path, format="PNG")


def load_png(path: Path) -> np.ndarray:
    with Image.open(path) as img:
        arr = np.asarray(img.convert("RGB"), dtype=np.float32)
    return arr / np.float32(255.0)


def generate_dataset(config: GenerationConfig, out_dir: Path) -> DatasetManifest:
    """Write a dataset manifest (and, unless lazy, every PNG) under out_dir.

    The image grid is identities x attributes x alpha grid; rendering each
    entry is an independent pure function, and the manifest write is the one
    serialized step at the end.
    """
    if config.identities < 1:
        raise ConfigurationError("need at least one identity")
    if len(config.attributes) < 1:
        raise ConfigurationError("need at least one attribute")
    catalog = catalog_by_name(config.attributes)
    grid = build_alpha_grid(config.alpha_min, config.alpha_max, config.grid_step)
    if len(grid) < 2:
        raise ConfigurationError("alpha grid needs at least two points")

    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ComfaceError(f"cannot create output directory {out_dir}: {exc}") from exc

    seeds = identity_seeds(config)
    manifest = DatasetManifest(
        version=MANIFEST_VERSION,
        render_size=config.render_size,
        attribute_catalog=tuple(config.attributes),
        identities=tuple(seeds),
        alpha_grid_millis=tuple(grid),
        lazy=config.lazy,
    )

    if not config.lazy:
        for seed in seeds:
            latent = sample_identity(seed, config.latent_dim)
            for attr_name, attr in catalog.items():
                sub = out_dir / "identities" / str(seed) / attr_name
                sub.mkdir(parents=True, exist_ok=True)
                for millis in grid:
                    params = edit(latent, attr, millis_to_alpha(millis))
                    pixels = render(params, config.render_size, seed)
                    save_png(pixels, out_dir / manifest.path_for(seed, attr_name, millis))

    manifest.save(out_dir / MANIFEST_FILENAME)
    return manifest


class ManifestImageSource:
    """Resolves (seed, attribute, alpha) to pixels for a manifest.

    Lazy manifests render on demand; eager ones read the PNG files. A small
    LRU keeps repeated lookups (validation batches, task pools) cheap.
    """

    def __init__(self, manifest: DatasetManifest, root_dir: Path | None = None,
                 cache_size: int = 1024):
        self.manifest = manifest
        self.root_dir = Path(root_dir) if root_dir is not None else None
        self._catalog = catalog_by_name(manifest.attribute_catalog)
        if not manifest.lazy and self.root_dir is None:
            raise ConfigurationError("eager manifests need the dataset root directory")
        self._get = functools.lru_cache(maxsize=cache_size)(self._fetch)

    def _fetch(self, seed: int, attr: str, alpha_millis: int) -> np.ndarray:
        if self.manifest.lazy:
            spec = EditSpec(seed, attr, millis_to_alpha(alpha_millis))
            return render_spec(spec, self.manifest.render_size, self._catalog).pixels
        return load_png(self.root_dir / self.manifest.path_for(seed, attr, alpha_millis))

    def pixels(self, seed: int, attr: str, alpha_millis: int) -> np.ndarray:
        return self._get(int(seed), attr, int(alpha_millis))
