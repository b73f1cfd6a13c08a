"""The participation taxonomy: four component kinds, three function groups
with their ten subfunctions, and the ten fixed paradigm ids."""

from __future__ import annotations

from enum import Enum


class ToolKind(str, Enum):
    TOOL = "tool"
    TOOLKIT = "toolkit"
    TECHNIQUE = "technique"
    METHOD = "method"


class Function(str, Enum):
    TELLING = "telling"
    ENACTING = "enacting"
    MAKING = "making"


class SubFunction(str, Enum):
    RECEIVE = "receive"
    PROVIDE = "provide"
    DISCUSS = "discuss"
    DELIBERATE = "deliberate"
    PROPOSE = "propose"
    VOTE = "vote"
    SHARE_PROJECTS = "share_projects"
    CO_DESIGN = "co_design"
    COLLECTIVE_PROBLEM_SOLVING = "collective_problem_solving"
    SHARE_GOODS = "share_goods"


FUNCTION_OF: dict[SubFunction, Function] = {
    SubFunction.RECEIVE: Function.TELLING,
    SubFunction.PROVIDE: Function.TELLING,
    SubFunction.DISCUSS: Function.ENACTING,
    SubFunction.DELIBERATE: Function.ENACTING,
    SubFunction.PROPOSE: Function.ENACTING,
    SubFunction.VOTE: Function.ENACTING,
    SubFunction.SHARE_PROJECTS: Function.MAKING,
    SubFunction.CO_DESIGN: Function.MAKING,
    SubFunction.COLLECTIVE_PROBLEM_SOLVING: Function.MAKING,
    SubFunction.SHARE_GOODS: Function.MAKING,
}

PARADIGM_IDS = ("INIP", "AST", "CODI", "DIREP", "REP", "COST", "SHAGO", "MAP", "CODE", "COPS")
