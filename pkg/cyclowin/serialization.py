"""JSON models for everything the command line prints.

Series are written as ``{"scale": s, "coeffs": [...]}`` with the numerators of p^s·x as decimal
strings, so reports stay exact and byte-identical across runs.
"""

import json
from typing import Any

from pydantic import BaseModel, ConfigDict, Field
from pydantic_core import to_jsonable_python

from .bt_modules import BTModule
from .checks import CheckReport
from .frames import FilElement, Frame
from .gamma_calculus import GammaAction
from .linalg import Matrix
from .padic_rings import PrecisionCtx, TruncatedSeries
from .wach import Alpha, KRTranslation, MonomialLattice
from .windows import FilteredMatrix, Window


class Model(BaseModel):
    model_config = ConfigDict(frozen=True)


class SeriesModel(Model):
    scale: int
    coeffs: list[str]

    @classmethod
    def of(cls, x: TruncatedSeries) -> "SeriesModel":
        return cls(**x.to_json())


def _entry(x: TruncatedSeries | FilElement) -> dict:
    if isinstance(x, FilElement):
        return {"fil": [SeriesModel.of(k).model_dump() for k in x.cofactors]}
    return SeriesModel.of(x).model_dump()


def matrix_json(A: Matrix | FilteredMatrix) -> list[list[dict]]:
    rows = A.entries if isinstance(A, FilteredMatrix) else A
    return [[_entry(x) for x in row] for row in rows]


class ContextModel(Model):
    p: int
    N: int
    M: int
    r: int
    lift: str

    @classmethod
    def of(cls, ctx: PrecisionCtx) -> "ContextModel":
        return cls(**ctx.to_json())


class FrameModel(Model):
    ring: str
    r: int
    lift: str
    var_level: int
    context: ContextModel

    @classmethod
    def of(cls, frame: Frame) -> "FrameModel":
        return cls(**frame.descriptor(), context=ContextModel.of(frame.ctx))


def _types(types: tuple[bool, ...]) -> str:
    return "".join("L" if t else "N" for t in types)


class WindowModel(Model):
    frame: FrameModel
    types: str
    psi: list[list[dict]]

    @classmethod
    def of(cls, W: Window) -> "WindowModel":
        return cls(frame=FrameModel.of(W.frame), types=_types(W.types), psi=matrix_json(W.psi))


class BTModel(Model):
    frame: FrameModel
    A: list[list[dict]]
    B: list[list[dict]]

    @classmethod
    def of(cls, module: BTModule) -> "BTModel":
        return cls(frame=FrameModel.of(module.frame), A=matrix_json(module.A), B=matrix_json(module.B))


class GeneratorModel(Model):
    chi: int
    matrix: list[list[dict]]


class ActionModel(Model):
    carrier: str
    generators: list[GeneratorModel]

    @classmethod
    def of(cls, act: GammaAction) -> "ActionModel":
        carrier = "window" if act.on_window else "bt"
        generators = [GeneratorModel(chi=chi, matrix=matrix_json(G)) for chi, G in act.generators]
        return cls(carrier=carrier, generators=generators)


class ZooModel(Model):
    name: str
    context: ContextModel
    window: WindowModel
    action: ActionModel
    bt: BTModel
    bt_action: ActionModel
    script: WindowModel
    script_action: ActionModel

    @classmethod
    def of(cls, obj) -> "ZooModel":
        return cls(
            name=obj.name,
            context=ContextModel.of(obj.ctx),
            window=WindowModel.of(obj.window),
            action=ActionModel.of(obj.action),
            bt=BTModel.of(obj.bt),
            bt_action=ActionModel.of(obj.bt_action),
            script=WindowModel.of(obj.script),
            script_action=ActionModel.of(obj.script_action),
        )


class CheckModel(Model):
    name: str
    passed: bool
    checked: int
    failures: list[str] = Field(default_factory=list)

    @classmethod
    def of(cls, report: CheckReport) -> "CheckModel":
        return cls(**report.to_json())


class SuiteModel(Model):
    suite: str
    summary: str
    passed: bool
    cases: list[CheckModel]


class RunModel(Model):
    context: ContextModel
    seed: int
    passed: bool
    suites: list[SuiteModel]


class LatticeModel(Model):
    alpha: dict[str, Any]
    exponents: dict[str, int]
    inverted: list[str]
    lattice: str

    @classmethod
    def of(cls, L: MonomialLattice) -> "LatticeModel":
        return cls(**L.to_json())


class TranslationModel(Model):
    direction: str
    r: int
    alpha: dict[str, Any]
    source: LatticeModel
    result: LatticeModel
    stable_after: int | None = None
    is_kisin_ren: bool

    @classmethod
    def of(cls, direction: str, r: int, alpha: Alpha, source, result, kisin_ren: bool, translation=None):
        stable = translation.stable_after if isinstance(translation, KRTranslation) else None
        return cls(
            direction=direction,
            r=r,
            alpha=alpha.to_json(),
            source=LatticeModel.of(source),
            result=LatticeModel.of(result),
            stable_after=stable,
            is_kisin_ren=kisin_ren,
        )


def dumps(model: BaseModel | dict | list) -> str:
    """Deterministic JSON: sorted keys, two-space indent, trailing newline."""
    data = to_jsonable_python(model)
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
