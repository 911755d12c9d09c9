"""
The tollbooth adaptation scenario.

A requestor asks the adaptation manager to adapt a service, giving an
estimated adaptation time, its deadline, the execution time after adaptation
and the overall execution bound. The manager checks both times against their
bounds and reports success or failure back to the requestor.
"""

import logging
from string import Template
from typing import List

from pydantic import BaseModel, ConfigDict, StrictInt, ValidationError

from ..errors import ScenarioError
from ..syntax.parser import parse_model
from ..syntax.terms import Model

logger = logging.getLogger(__name__)


class TollboothParams(BaseModel):
    """
    Values sent with the requestor's ``serv.create`` message.

    Attributes:
        adapt_estimate: Estimated adaptation time
        adapt_deadline: Adaptation time bound
        exec_estimate: Execution time once adapted
        exec_bound: Overall execution time bound
    """

    model_config = ConfigDict(frozen=True)

    adapt_estimate: StrictInt = 0
    adapt_deadline: StrictInt = 4
    exec_estimate: StrictInt = 10
    exec_bound: StrictInt = 60

    @classmethod
    def from_csv(cls, text: str) -> "TollboothParams":
        """
        Parse ``a,b,c,d`` into parameters.

        Raises:
            ScenarioError: not exactly four comma-separated integers
        """
        parts = [part.strip() for part in text.split(",")]
        if len(parts) != 4:
            raise ScenarioError(
                f"tollbooth expects 4 comma-separated integers, got {len(parts)}: {text!r}"
            )
        try:
            values = [int(part) for part in parts]
        except ValueError:
            raise ScenarioError(f"tollbooth parameters must be integers: {text!r}") from None
        fields = ("adapt_estimate", "adapt_deadline", "exec_estimate", "exec_bound")
        try:
            return cls(**dict(zip(fields, values)))
        except ValidationError as exc:
            raise ScenarioError(f"invalid tollbooth parameters: {exc}") from None

    def as_list(self) -> List[int]:
        return [self.adapt_estimate, self.adapt_deadline, self.exec_estimate, self.exec_bound]


TOLLBOOTH_TEMPLATE = Template(
    """\
// Adaptation manager, requestor and main service

let
adaptManager(service) =
    * [X][Y][Z][XX][YY]
    service.create?<X,Y,Z,XX>.p.adaptime!<X,Y,Z,XX>
  | [X][Y][Z][XX]
    ser.checkOK?<X,Y,Z,XX>.q.exectime!<Z,XX>
  | ser.checkFail?<>. ser.launchFail!<repsvc>
  | ser.checkFail2?<>. ser.launchFail!<repsvc>
requestor() =
    serv.create!<${create_args}>
  | ser.checkOK2?<>.amadapt.launchOK!<> |
    (amadapt.launchOK?<>.s.signalOK!<>
    + ser.launchFail?<repsvc>.s.signalFail!<>
    + ser.launchFailx?<>.s.signalFail!<>)
in
adaptManager(serv)
| requestor()
| * amcheck()
| amcheck2()
| s.signalFail?<>.nil
| s.signalOK?<>.nil
end

// Adaptation-time check

Amcheck_gt_deadline(X) =
  (ser.checkFail!<>)
Amcheck_le_deadline(X,Y,Z,XX) =
  (ser.checkOK!<X,Y,Z,XX>)
Amcheck_gt_deadline2(X) =
   (ser.checkFail2!<>)
  | memory.assert?<X>.nil
Amcheck_le_deadline2(X) =
  (ser.checkOK2!<>)
amcheck()=
   [X][Y][Z][XX]
   p.adaptime?<X,Y,Z,XX>.
   [i#]
   (i.selectgreater!<X gt Y> |
     (i.selectgreater?<true>.
      Amcheck_gt_deadline(X) +
      i.selectgreater?<false>.
      Amcheck_le_deadline(X,Y,Z,XX)
     )
   )

// Execution-time check

amcheck2()=
   [X][Y]
   q.exectime?<X,Y>.
   [i#]
   [K]
   (i.selectgreater!<X gt Y> |
     (i.selectgreater?<true>.
      Amcheck_gt_deadline2(X) +
      i.selectgreater?<false>.
      Amcheck_le_deadline2(X)
     )
    )
"""
)


def render_tollbooth(params: TollboothParams = TollboothParams()) -> str:
    """Model text of the scenario with ``params`` in the requestor's create message."""
    create_args = ",".join(str(v) for v in params.as_list())
    return TOLLBOOTH_TEMPLATE.substitute(create_args=create_args)


def build_tollbooth(params: TollboothParams = TollboothParams()) -> Model:
    """Parsed scenario model for ``params``."""
    logger.debug("Building tollbooth model with %s", params.as_list())
    return parse_model(render_tollbooth(params))
