"""Synthetic 1 Hz GPU-metric traces from declarative scene scripts.

The signal model ties every counter to a common scalar scene load plus
discrete avatar steps and app-session plateaus:

    m_i(t) = b_i(scene) + sign_i * (g_i * load(t)
                                    + delta_i * joins(t)
                                    + g_i * app_i(t)) + eps_t

* load(t) is the screen coverage of scripted objects: each object at depth z
  with size s contributes kappa * (s/z)^2 while its x position lies inside
  the field of view (half-width fov_width_w * z around screen center); the
  sum is clamped to [0, 1]. Projected area scales quadratically with angular
  size, which makes coverage grow with s and shrink with z, and makes a
  slower sweep occupy the screen for proportionally more seconds.
* joins(t) counts avatars that have entered by second t; each join moves an
  avatar-responsive metric by one step of delta_i, upward or downward with
  the metric's load direction.
* app_i(t) is the summed intensity of active app sessions (per-metric gains
  in [0, 1], amplitude g_i), with a one-second rise at session start and a
  one-second fall after it ends.
* eps_t is i.i.d. Gaussian per second. If the script does not pin
  noise_sigma, each metric uses its profile sigma, doubled in AR scenes
  (passthrough mixing is noisier than a fully rendered view).

Everything is a pure, seeded function of its inputs: equal scripts produce
bit-identical output.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .catalog import MetricCatalog
from .errors import InvalidScriptError, InvalidSpecError, SchemaError
from .seeding import derive_seed
from .traces import CorpusItem, LabeledCorpus, TraceSet

SCENE_VR = "vr"
SCENE_AR = "ar"

# Screen-coverage scale for a unit object at unit depth.
COVERAGE_KAPPA = 0.02
# Default field-of-view half-width at depth 1 (scene units).
DEFAULT_FOV_HALF_WIDTH = 8.0
# AR passthrough noise multiplier relative to the profile sigma.
AR_NOISE_FACTOR = 2.0


@dataclass(frozen=True)
class MetricResponse:
    """Per-metric response magnitudes: baselines, load gain, step, noise."""

    b_ar: float
    b_vr: float
    g: float
    delta: float
    sigma: float

    def baseline(self, scene_type: str) -> float:
        return self.b_ar if scene_type == SCENE_AR else self.b_vr


# Default response profile for the built-in catalog. Magnitudes are synthetic
# but keep percent metrics inside [0, 100] for the shipped scenarios, keep
# delta at 8x sigma so participant steps stand clear of the noise floor, and
# leave four scene-inert counters (delta = 0): clock frequency, preemption
# behavior and system-memory stalls do not track scene population.
DEFAULT_PROFILE: dict[str, MetricResponse] = {
    "gpu_frequency": MetricResponse(6.45e8, 5.87e8, 2.0e7, 0.0, 3.0e6),
    "gpu_bus_busy": MetricResponse(34.0, 30.0, 55.0, 8.0, 1.0),
    "preemptions_per_second": MetricResponse(132.0, 120.0, 60.0, 0.0, 4.0),
    "avg_preemption_delay": MetricResponse(990.0, 900.0, 250.0, 0.0, 25.0),
    "vertex_fetch_stall": MetricResponse(12.0, 8.0, 45.0, 8.0, 1.0),
    "texture_fetch_stall": MetricResponse(14.0, 10.0, 48.0, 8.0, 1.0),
    "texture_l2_miss": MetricResponse(18.0, 14.0, 42.0, 8.0, 1.0),
    "stalled_on_system_memory": MetricResponse(16.0, 12.0, 40.0, 0.0, 1.0),
    "vertex_memory_read": MetricResponse(3.3e7, 3.0e7, 5.0e7, 6.4e6, 8.0e5),
    "sp_memory_read": MetricResponse(6.05e7, 5.5e7, 7.0e7, 8.8e6, 1.1e6),
    "global_memory_load_instructions": MetricResponse(2.42e6, 2.2e6, 3.5e6, 4.0e5, 5.0e4),
    "global_buffer_data_read_request_bw": MetricResponse(4.4e7, 4.0e7, 6.0e7, 7.2e6, 9.0e5),
    "global_buffer_data_read_bw": MetricResponse(6.6e7, 6.0e7, 9.0e7, 1.04e7, 1.3e6),
    "global_image_uncompressed_data_read_bw": MetricResponse(2.75e7, 2.5e7, 4.5e7, 5.6e6, 7.0e5),
    "bytes_data_write_requested": MetricResponse(1.76e7, 1.6e7, 2.4e7, 3.2e6, 4.0e5),
    "bytes_data_actually_written": MetricResponse(1.54e7, 1.4e7, 2.1e7, 2.8e6, 3.5e5),
    "global_buffer_read_l2_hit": MetricResponse(59.0, 55.0, 35.0, 8.0, 1.0),
    "vertex_instructions_per_second": MetricResponse(8.8e6, 8.0e6, 1.5e7, 2.0e6, 2.5e5),
    "local_memory_store_instructions": MetricResponse(9.9e5, 9.0e5, 1.6e6, 2.0e5, 2.5e4),
    "avg_load_store_instructions_per_cycle": MetricResponse(0.88, 0.8, 1.2, 0.16, 0.02),
    "avg_bytes_per_fragment": MetricResponse(3.3, 3.0, 4.0, 0.56, 0.07),
    "l1_texture_cache_miss_per_pixel": MetricResponse(0.385, 0.35, 0.9, 0.096, 0.012),
    "pre_clipped_polygons_per_second": MetricResponse(1.21e6, 1.1e6, 2.2e6, 2.4e5, 3.0e4),
    "prims_trivially_rejected": MetricResponse(82.0, 78.0, 50.0, 8.0, 1.0),
    "prims_clipped": MetricResponse(78.0, 74.0, 45.0, 8.0, 1.0),
    "average_vertices_per_polygon": MetricResponse(5.9, 5.5, 2.0, 0.4, 0.05),
    "average_polygon_area": MetricResponse(148.0, 140.0, 60.0, 12.8, 1.6),
    "nearest_filtered": MetricResponse(26.0, 22.0, 40.0, 8.0, 1.0),
    "anisotropic_filtered": MetricResponse(22.0, 18.0, 35.0, 8.0, 1.0),
    "non_base_level_textures": MetricResponse(26.0, 20.0, 60.0, 8.0, 1.0),
}

# Fallback response for user-defined metrics absent from a profile.
_GENERIC_RESPONSE = MetricResponse(11.0, 10.0, 20.0, 4.0, 0.5)


def builtin_profile() -> dict[str, MetricResponse]:
    return dict(DEFAULT_PROFILE)


def load_profile(path) -> dict[str, MetricResponse]:
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise SchemaError(f"{path}: profile must be a JSON object")
    out = {}
    for mid, obj in raw.items():
        try:
            out[mid] = MetricResponse(
                b_ar=float(obj["b_ar"]), b_vr=float(obj["b_vr"]),
                g=float(obj["g"]), delta=float(obj["delta"]),
                sigma=float(obj["sigma"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"{path}: bad profile entry for {mid!r}: {exc}") from exc
    return out


def write_profile(profile: dict[str, MetricResponse], path) -> None:
    payload = {
        mid: {"b_ar": r.b_ar, "b_vr": r.b_vr, "g": r.g, "delta": r.delta,
              "sigma": r.sigma}
        for mid, r in profile.items()
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


@dataclass(frozen=True)
class ObjectSweep:
    """An object crossing the scene at constant speed and fixed depth."""

    size_s: float
    speed_v: float
    depth_z: float
    x_start: float
    x_end: float
    t_start: float = 0.0

    @property
    def travel_seconds(self) -> float:
        return abs(self.x_end - self.x_start) / self.speed_v

    @property
    def t_end(self) -> float:
        return self.t_start + self.travel_seconds


@dataclass(frozen=True)
class StaticObject:
    """An object held in view during [t_start, t_end)."""

    size_s: float
    depth_z: float
    t_start: float
    t_end: float


@dataclass(frozen=True)
class AvatarJoin:
    """A participant entering the scene (and staying) at t_join."""

    t_join: float


@dataclass(frozen=True)
class AppSession:
    """A foreground app running during [t_start, t_end].

    intensity maps metric id -> gain in [0, 1]; missing metrics get 0.
    """

    app_id: str
    t_start: float
    t_end: float
    intensity: dict[str, float] = field(default_factory=dict)


SceneEvent = ObjectSweep | StaticObject | AvatarJoin | AppSession


@dataclass(frozen=True)
class SceneScript:
    scene_type: str = SCENE_VR
    duration_s: int = 30
    seed: int = 0
    fov_width_w: float = DEFAULT_FOV_HALF_WIDTH
    events: tuple[SceneEvent, ...] = ()
    noise_sigma: float | dict[str, float] | None = None

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        self.validate()

    def validate(self) -> None:
        if self.scene_type not in (SCENE_VR, SCENE_AR):
            raise InvalidScriptError(f"scene_type must be vr|ar, got {self.scene_type!r}")
        if not isinstance(self.duration_s, (int, np.integer)) or self.duration_s < 1:
            raise InvalidScriptError(f"duration_s must be a positive integer, got {self.duration_s!r}")
        if self.fov_width_w <= 0:
            raise InvalidScriptError("fov_width_w must be > 0")
        ns = self.noise_sigma
        if isinstance(ns, dict):
            if any(v < 0 for v in ns.values()):
                raise InvalidScriptError("noise_sigma values must be >= 0")
        elif ns is not None and ns < 0:
            raise InvalidScriptError("noise_sigma must be >= 0")
        for ev in self.events:
            self._validate_event(ev)

    def _validate_event(self, ev: SceneEvent) -> None:
        d = self.duration_s
        if isinstance(ev, ObjectSweep):
            if ev.depth_z <= 0 or ev.speed_v <= 0 or ev.size_s <= 0:
                raise InvalidScriptError(f"sweep needs positive size/speed/depth: {ev}")
            if ev.x_end == ev.x_start:
                raise InvalidScriptError("sweep must cover a nonzero distance")
            if not 0 <= ev.t_start <= d:
                raise InvalidScriptError(f"sweep t_start {ev.t_start} outside [0, {d}]")
        elif isinstance(ev, StaticObject):
            if ev.depth_z <= 0 or ev.size_s <= 0:
                raise InvalidScriptError(f"static object needs positive size/depth: {ev}")
            if ev.t_end <= ev.t_start:
                raise InvalidScriptError("static object needs t_end > t_start")
            if not (0 <= ev.t_start <= d and 0 <= ev.t_end <= d):
                raise InvalidScriptError("static object times outside script duration")
        elif isinstance(ev, AvatarJoin):
            if not 0 <= ev.t_join <= d:
                raise InvalidScriptError(f"avatar join at {ev.t_join} outside [0, {d}]")
        elif isinstance(ev, AppSession):
            if ev.t_end <= ev.t_start:
                raise InvalidScriptError("app session needs t_end > t_start")
            if not (0 <= ev.t_start <= d and 0 <= ev.t_end <= d):
                raise InvalidScriptError("app session times outside script duration")
            for mid, v in ev.intensity.items():
                if not 0.0 <= v <= 1.0:
                    raise InvalidScriptError(f"intensity[{mid!r}]={v} outside [0, 1]")
        else:
            raise InvalidScriptError(f"unknown event type {type(ev).__name__}")


@dataclass(frozen=True)
class RealizedEvent:
    kind: str
    t_start: float
    t_end: float
    detail: dict = field(default_factory=dict)


@dataclass
class SimulationOutput:
    traces: TraceSet
    ground_truth_pixels: np.ndarray
    event_log: list[RealizedEvent]


def _coverage(size_s: float, depth_z: float) -> float:
    return COVERAGE_KAPPA * (size_s / depth_z) ** 2


def _resolve_sigma(script: SceneScript, metric_id: str,
                   response: MetricResponse) -> float:
    ns = script.noise_sigma
    default = response.sigma * (AR_NOISE_FACTOR if script.scene_type == SCENE_AR else 1.0)
    if ns is None:
        return default
    if isinstance(ns, dict):
        return float(ns.get(metric_id, default))
    return float(ns)


def simulate(script: SceneScript, catalog: MetricCatalog,
             profile: dict[str, MetricResponse] | None = None) -> SimulationOutput:
    """Render a script into a TraceSet plus per-second pixel ground truth.

    ground_truth_pixels tracks scripted objects only (avatars and app
    sessions move metrics through their own terms, not the pixel series).
    """
    if len(catalog) == 0:
        raise InvalidScriptError("catalog must be nonempty")
    script.validate()
    profile = profile if profile is not None else DEFAULT_PROFILE
    T = script.duration_s
    t = np.arange(T, dtype=float)

    load = np.zeros(T)
    joins = np.zeros(T)
    event_log: list[RealizedEvent] = []
    app_sessions: list[tuple[AppSession, np.ndarray]] = []

    for ev in script.events:
        if isinstance(ev, StaticObject):
            mask = (t >= ev.t_start) & (t < ev.t_end)
            load[mask] += _coverage(ev.size_s, ev.depth_z)
            event_log.append(RealizedEvent(
                "static_object", ev.t_start, ev.t_end,
                {"size_s": ev.size_s, "depth_z": ev.depth_z}))
        elif isinstance(ev, ObjectSweep):
            direction = math.copysign(1.0, ev.x_end - ev.x_start)
            active = (t >= ev.t_start) & (t <= ev.t_end)
            x = ev.x_start + direction * ev.speed_v * (t - ev.t_start)
            visible = active & (np.abs(x) <= script.fov_width_w * ev.depth_z)
            load[visible] += _coverage(ev.size_s, ev.depth_z)
            event_log.append(RealizedEvent(
                "object_sweep", ev.t_start, ev.t_end,
                {"size_s": ev.size_s, "speed_v": ev.speed_v, "depth_z": ev.depth_z,
                 "x_start": ev.x_start, "x_end": ev.x_end}))
        elif isinstance(ev, AvatarJoin):
            joins[t >= ev.t_join] += 1.0
            event_log.append(RealizedEvent("avatar_join", ev.t_join, float(T), {}))
        elif isinstance(ev, AppSession):
            ramp = np.zeros(T)
            ramp[(t > ev.t_start) & (t < ev.t_end)] = 1.0
            ramp[(t >= ev.t_start) & (t < ev.t_start + 1.0)] = 0.5
            ramp[(t >= ev.t_end) & (t < ev.t_end + 1.0)] = 0.5
            app_sessions.append((ev, ramp))
            event_log.append(RealizedEvent(
                "app_session", ev.t_start, ev.t_end, {"app_id": ev.app_id}))

    pixels = np.clip(load, 0.0, 1.0)

    rng = np.random.default_rng(script.seed)
    noise = rng.standard_normal((T, len(catalog)))

    matrix = np.empty((T, len(catalog)))
    for j, desc in enumerate(catalog):
        resp = profile.get(desc.id, _GENERIC_RESPONSE)
        app_level = np.zeros(T)
        for ev, ramp in app_sessions:
            gain = float(ev.intensity.get(desc.id, 0.0))
            if gain:
                app_level += gain * ramp
        signal = resp.g * pixels + resp.delta * joins + resp.g * app_level
        sigma = _resolve_sigma(script, desc.id, resp)
        matrix[:, j] = resp.baseline(script.scene_type) + desc.sign * signal \
            + sigma * noise[:, j]

    traces = TraceSet(
        catalog.ids(), matrix, t0=0,
        meta={"scene_type": script.scene_type, "seed": str(script.seed)})
    event_log.sort(key=lambda e: (e.t_start, e.kind))
    return SimulationOutput(traces, pixels, event_log)


@dataclass(frozen=True)
class ClassSpec:
    label: str
    script: SceneScript


@dataclass(frozen=True)
class CorpusSpec:
    classes: tuple[ClassSpec, ...]
    repetitions: int
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))
        if len(self.classes) < 2:
            raise InvalidSpecError("need >= 2 classes")
        if self.repetitions < 1:
            raise InvalidSpecError("need >= 1 repetition")
        labels = [c.label for c in self.classes]
        if len(set(labels)) != len(labels):
            raise InvalidSpecError("class labels must be unique")


def generate_corpus(spec: CorpusSpec, catalog: MetricCatalog,
                    profile: dict[str, MetricResponse] | None = None) -> LabeledCorpus:
    """classes x repetitions labeled traces, item seeds derived from
    (spec.seed, class index, repetition index). Same spec, same corpus."""
    items = []
    for ci, cls in enumerate(spec.classes):
        for ri in range(spec.repetitions):
            item_seed = derive_seed(spec.seed, ci, ri)
            script = dataclasses.replace(cls.script, seed=item_seed)
            out = simulate(script, catalog, profile)
            out.traces.meta.update({
                "scenario": cls.label,
                "class_index": str(ci),
                "repetition": str(ri),
            })
            items.append(CorpusItem(out.traces, cls.label, group=f"rep{ri:02d}"))
    return LabeledCorpus(items)


def avatar_staircase(n: int, hold_s: int, catalog: MetricCatalog,
                     profile: dict[str, MetricResponse] | None = None,
                     scene_type: str = SCENE_VR, seed: int = 0,
                     noise_sigma: float | dict[str, float] | None = None) -> SimulationOutput:
    """n participants joining hold_s seconds apart after a 2*hold_s lead-in.

    Avatar-responsive metrics show n steps (up or down with their load
    direction); with zero noise every affected metric has exactly n + 1
    distinct levels.
    """
    if n < 0:
        raise InvalidScriptError(f"participant count must be >= 0, got {n}")
    if hold_s < 1:
        raise InvalidScriptError(f"hold_s must be >= 1, got {hold_s}")
    lead = 2 * hold_s
    duration = lead + (n + 2) * hold_s
    joins = tuple(AvatarJoin(float(lead + k * hold_s)) for k in range(n))
    script = SceneScript(scene_type=scene_type, duration_s=duration, seed=seed,
                         events=joins, noise_sigma=noise_sigma)
    return simulate(script, catalog, profile)


# ---------------------------------------------------------------------------
# Script (de)serialization: JSON mirror of SceneScript / CorpusSpec.

_EVENT_KINDS = {
    "object_sweep": ObjectSweep,
    "static_object": StaticObject,
    "avatar_join": AvatarJoin,
    "app_session": AppSession,
}


def _event_to_dict(ev: SceneEvent) -> dict:
    for kind, cls in _EVENT_KINDS.items():
        if isinstance(ev, cls):
            d = dataclasses.asdict(ev)
            d["kind"] = kind
            return d
    raise InvalidScriptError(f"unknown event type {type(ev).__name__}")


def _event_from_dict(obj: dict) -> SceneEvent:
    kind = obj.get("kind")
    cls = _EVENT_KINDS.get(kind)
    if cls is None:
        raise SchemaError(f"unknown event kind {kind!r}")
    kwargs = {k: v for k, v in obj.items() if k != "kind"}
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise SchemaError(f"bad {kind} event: {exc}") from exc


def script_to_dict(script: SceneScript) -> dict:
    return {
        "scene_type": script.scene_type,
        "duration_s": script.duration_s,
        "seed": script.seed,
        "fov_width_w": script.fov_width_w,
        "noise_sigma": script.noise_sigma,
        "events": [_event_to_dict(ev) for ev in script.events],
    }


def script_from_dict(obj: dict) -> SceneScript:
    if not isinstance(obj, dict):
        raise SchemaError("scene script must be a JSON object")
    noise = obj.get("noise_sigma")
    if isinstance(noise, dict):
        noise = {str(k): float(v) for k, v in noise.items()}
    return SceneScript(
        scene_type=obj.get("scene_type", SCENE_VR),
        duration_s=int(obj.get("duration_s", 30)),
        seed=int(obj.get("seed", 0)),
        fov_width_w=float(obj.get("fov_width_w", DEFAULT_FOV_HALF_WIDTH)),
        events=tuple(_event_from_dict(e) for e in obj.get("events", [])),
        noise_sigma=noise,
    )


def load_script(path) -> SceneScript:
    with open(path, "r", encoding="utf-8") as fh:
        return script_from_dict(json.load(fh))


def corpus_spec_from_dict(obj: dict) -> CorpusSpec:
    if not isinstance(obj, dict) or "classes" not in obj:
        raise SchemaError("corpus spec must be an object with 'classes'")
    classes = tuple(
        ClassSpec(str(c["label"]), script_from_dict(c["script"]))
        for c in obj["classes"])
    return CorpusSpec(classes=classes,
                      repetitions=int(obj.get("repetitions", 1)),
                      seed=int(obj.get("seed", 0)))


def load_corpus_spec(path) -> CorpusSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return corpus_spec_from_dict(json.load(fh))
