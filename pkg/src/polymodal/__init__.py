"""Polyadic Boolean modal logic: terms, tables, model checking and satisfiability reductions."""

from .checker import check_labeling, check_naive, label
from .errors import (
    ArityError,
    BudgetError,
    ConsistencyError,
    FragmentError,
    ParseError,
    PMLError,
    PreconditionError,
    ShapeError,
    TruncationError,
    VocabularyError,
)
from .formulas import (
    BOT,
    TOP,
    And,
    Bot,
    Box,
    Diamond,
    Exists,
    Forall,
    Formula,
    Not,
    Or,
    Prop,
    Top,
    Window,
    eliminate_window,
    subformula_order,
)
from .kripke import EncodedModel, KripkeModel, encode_list, parse_model, random_model, render_model
from .oracle import SatVerdict, all_witnesses, equisat_check, sat_bounded
from .perms import Permutation, generator_word
from .reduce_neg import NegReduction, backward_model_neg, forward_model_neg, reduce_neg
from .reduce_tables import (
    TableReduction,
    backward_model_tbl,
    build_theta,
    forward_model_tbl,
    reduce_tables,
    table_normal_form,
)
from .syntax import parse_formula, parse_term, render_formula, render_term
from .tables import Literal, Table, enumerate_tables, table_action, table_entails, table_of_tuple
from .terms import Diff, Inter, Neg, RelationSymbol, Rot, Swp, Term, Union, eval_term, normalize_term
