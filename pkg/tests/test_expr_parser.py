"""
Tests for the expression language.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rankone.exceptions import (
    ArityError,
    DomainError,
    ExprSyntaxError,
    ParamOutOfRangeError,
    RegistrationError,
    UnboundVariableError,
    UnknownIdentifierError,
)
from rankone.models.energy import FROM_ONE, HALF_LINE, ScalarFn, SymmetricFn2
from rankone.services import zoo
from rankone.services.expr_parser import (
    VARIABLE_SETS,
    evaluate,
    parse,
    substitute,
    to_scalar_fn,
    to_source,
    tokenize,
)

T = VARIABLE_SETS["h"]
ETA = VARIABLE_SETS["ftilde"]
G = VARIABLE_SETS["g"]


class TestParse:
    """Grammar and error positions."""

    def test_valid_sources(self):
        """Substituted and plain sources parse."""
        assert evaluate(parse("exp(0.25*eta)", ETA), {"eta": 4.0}) == pytest.approx(
            math.e
        )
        assert evaluate(parse("2*(t+1/t)-4", T), {"t": 1.0}) == 0.0

    def test_dangling_operator(self):
        """'theta^' fails at the end of input."""
        with pytest.raises(ExprSyntaxError) as info:
            parse("theta^", VARIABLE_SETS["f"])
        assert info.value.position == 6

    def test_position_is_in_bytes(self):
        """A two-byte space shifts the reported offset by one."""
        with pytest.raises(ExprSyntaxError) as info:
            parse("\u00a0theta^", VARIABLE_SETS["f"])
        assert info.value.position == 8

    def test_bad_character(self):
        """Characters outside the token set are reported where they start."""
        with pytest.raises(ExprSyntaxError) as info:
            parse("t + $", T)
        assert info.value.position == 4

    @pytest.mark.parametrize("src", ["", "   ", "(t", "t t", "1e999", "max(t,)"])
    def test_malformed(self, src):
        """Empty, unbalanced, juxtaposed and overflowing input."""
        with pytest.raises(ExprSyntaxError):
            parse(src, T)

    def test_unknown_identifier(self):
        """Variables outside the representation and unknown functions."""
        with pytest.raises(UnknownIdentifierError) as info:
            parse("t + eta", T)
        assert info.value.position == 4
        with pytest.raises(UnknownIdentifierError):
            parse("gamma(t)", T)

    def test_arity(self):
        """Functions check their argument counts."""
        with pytest.raises(ArityError):
            parse("pow(t)", T)
        with pytest.raises(ArityError):
            parse("exp(t, t)", T)
        assert evaluate(parse("max(1, t, 3)", T), {"t": 7.0}) == 7.0

    def test_precedence(self):
        """'^' binds tighter than '*' and is right-associative."""
        assert evaluate(parse("2*3^2", T), {}) == 18.0
        assert evaluate(parse("2^3^2", T), {}) == 512.0
        assert evaluate(parse("-2^2", T), {}) == 4.0
        assert evaluate(parse("1-2-3", T), {}) == -4.0

    def test_tokens(self):
        """Whitespace is dropped and an end token closes the stream."""
        kinds = [token.kind for token in tokenize(" log(t) ")]
        assert kinds == ["ident", "op", "ident", "op", "end"]


class TestEvaluate:
    """IEEE evaluation with domain checks."""

    def test_examples(self):
        """t + 1/t and the Hencky ratio form."""
        assert evaluate(parse("t+1/t", T), {"t": 2.0}) == 2.5
        assert evaluate(parse("log(t)^2/2", T), {"t": 2.0}) == pytest.approx(
            0.5 * math.log(2.0) ** 2
        )

    @pytest.mark.parametrize(
        "src, t",
        [("log(t)", 0.0), ("sqrt(t)", -1.0), ("1/t", 0.0), ("exp(t)", 1000.0)],
    )
    def test_domain_errors(self, src, t):
        """Invalid arguments and overflow raise DomainError."""
        with pytest.raises(DomainError):
            evaluate(parse(src, T), {"t": t})

    def test_unbound(self):
        """A missing binding is reported by name."""
        with pytest.raises(UnboundVariableError, match="t"):
            evaluate(parse("t", T), {})

    @given(st.floats(min_value=0.01, max_value=100.0))
    @settings(max_examples=50)
    def test_source_round_trip(self, t):
        """to_source output parses back to the same function."""
        e = parse("-t^2/3 + cosh(log(t)) * max(t, 1/t) - pow(t, 0.5)", T)
        again = parse(to_source(e.root), T)
        assert evaluate(again, {"t": t}) == evaluate(e, {"t": t})


class TestToScalarFn:
    """Wrapping expressions as registered functions."""

    def test_matches_zoo_ex_v(self):
        """exp(eta + sin(eta)) equals the catalog entry."""
        fn = to_scalar_fn(parse("exp(eta + sin(eta))", ETA))
        assert isinstance(fn, ScalarFn)
        assert fn.domain == HALF_LINE
        ex_v = zoo.make("ex_v").energy.scalar
        for eta in (0.0, 0.5, math.pi / 2.0, 3.0):
            assert fn(eta) == pytest.approx(ex_v(eta))

    def test_domain_follows_variable(self):
        """z-forms live on [1, inf)."""
        fn = to_scalar_fn(parse("r", VARIABLE_SETS["z"]))
        assert fn.domain == FROM_ONE

    def test_symmetric_pair(self):
        """l1*l2 is a symmetric function."""
        g = to_scalar_fn(parse("(l1*l2)", G))
        assert isinstance(g, SymmetricFn2)
        assert g(2.0, 3.0) == 6.0

    def test_antisymmetric_rejected(self):
        """l1 - l2 fails registration."""
        with pytest.raises(RegistrationError):
            to_scalar_fn(parse("l1 - l2", G))


class TestSubstitute:
    """Parameter substitution before parsing."""

    def test_replaces_identifiers(self):
        """Named parameters become parenthesized literals."""
        src = substitute("exp(k*eta)/k", {"k": 0.25})
        assert src == "exp((0.25)*eta)/(0.25)"
        assert evaluate(parse(src, ETA), {"eta": 0.0}) == 4.0

    def test_negative_values_keep_precedence(self):
        """A negative parameter under '^' stays grouped."""
        src = substitute("a^2", {"a": -3.0})
        assert evaluate(parse(src, ETA), {}) == 9.0

    def test_no_params(self):
        """An empty mapping leaves the source untouched."""
        assert substitute("eta", {}) == "eta"

    def test_unused_parameter(self):
        """Keys that do not occur are reported."""
        with pytest.raises(ParamOutOfRangeError, match="beta"):
            substitute("exp(k*eta)", {"k": 1.0, "beta": 2.0})

    def test_function_names_are_reserved(self):
        """A parameter cannot shadow a function."""
        with pytest.raises(ParamOutOfRangeError):
            substitute("exp(eta)", {"exp": 1.0})


class TestCatalogExpressions:
    """Catalog energies written in the expression language."""

    @pytest.mark.parametrize(
        "name, params, src, representation, lo, hi",
        [
            ("ex_i", {}, "2*(t+1/t)-4", "h", 0.05, 20.0),
            ("ex_ii", {}, "exp(log(t)^2/2)*(t+1/t)", "h", 0.05, 20.0),
            ("ex_iii", {}, "cosh(eta)", "ftilde", 1e-6, 20.0),
            ("ex_iv", {"beta": 1.0}, "eta^0.5", "ftilde", 1e-6, 20.0),
            ("ex_v", {}, "exp(eta + sin(eta))", "ftilde", 1e-6, 20.0),
        ],
    )
    def test_agrees_with_constructor(self, name, params, src, representation, lo, hi):
        """Parsed and native scalars agree on a thousand points."""
        fn = to_scalar_fn(parse(src, VARIABLE_SETS[representation]))
        native = zoo.make(name, params).energy.scalar
        for x in np.geomspace(lo, hi, 1000):
            assert fn(float(x)) == pytest.approx(
                native(float(x)), rel=1e-12, abs=1e-12
            )

    @pytest.mark.parametrize(
        "src",
        ["2*(t+1/t)-4", "exp(log(t)^2/2)*(t+1/t)", "-t^-2^3", "max(1, -(t), 2)/3"],
    )
    def test_print_parse_idempotent(self, src):
        """Printing and reparsing yields the same tree."""
        root = parse(src, T).root
        assert parse(to_source(root), T).root == root
