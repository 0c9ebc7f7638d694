"""Finite-frame workbench for Grzegorczyk modal logics.

Formulas, Kripke frames and models, bisimulation, unraveling constructions,
control statements with frame labelings, and bounded countermodel search.
"""

__version__ = "0.1.0"

from .errors import (ArityError, Check, GrzLabError, ParseError, PreconditionError,
                     ResourceLimitError, Violation)
from .formula import (BOT, TOP, And, Box, Const, Dia, Formula, Iff, Imp, Not, Or, Var,
                      build_axiom, build_macro, jankov_fine, parse, substitute, theta, to_text)
from .frame import Frame, FrameClass, check_class, enumerate_frames, properties
from .model import (Model, PointedModel, SearchReport, class_valid_upto, extension,
                    frame_valid, satisfies)
from .bisim import are_bisimilar, is_bisimulation, largest_bisimulation
from .construct import (UnravelResult, powerset_button_model, ratchet_chain_model,
                        unravel_baled, unravel_tree)
from .control import (Labeling, check_control, check_frame_labeling, labeling_from_buttons,
                      labeling_from_ratchet, model_labeling_from_frame_labeling,
                      verify_model_labeling)
from .decide import LogicId, axiom_suite, countermodel_search, verify_displayed_lemmas
