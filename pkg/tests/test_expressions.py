"""The shared arithmetic grammar."""

import numpy as np
import pytest

from ifscert.expressions import bind, evaluate, parse_expression
from ifscert.errors import ExpressionError


class TestParseEval:
    @pytest.mark.parametrize(
        "text,env,expected",
        [
            ("2+3*4^2", {}, 50.0),
            ("(2+3)*4", {}, 20.0),
            ("2^3", {}, 8.0),
            ("2^-1", {}, 0.5),
            ("10/4", {}, 2.5),
            ("1/2^i", {"i": 2}, 0.25),
            ("x1/2 + 1/2^i", {"x1": 0.0, "i": 2}, 0.25),
            ("r/(1+r)", {"r": 1.0}, 0.5),
            ("0 - x1", {"x1": 3.0}, -3.0),
            ("1.5e2", {}, 150.0),
        ],
    )
    def test_values(self, text, env, expected):
        assert evaluate(parse_expression(text), **env) == expected

    def test_vectorized(self):
        expr = parse_expression("x1/3")
        out = evaluate(expr, x1=np.array([0.0, 1.0, 3.0]))
        assert np.array_equal(out, [0.0, 1 / 3, 1.0])

    def test_power_binds_tighter_than_times(self):
        assert evaluate(parse_expression("2*3^2")) == 18.0

    def test_variables_recorded(self):
        expr = parse_expression("x1 + x2*i")
        assert expr.variables == {"x1", "x2", "i"}


class TestErrors:
    @pytest.mark.parametrize("bad", ["", "1 +", "(1", "x", "1//2", "-x1", "x1^r"])
    def test_syntax_errors(self, bad):
        with pytest.raises(ExpressionError):
            parse_expression(bad)

    def test_division_by_literal_zero(self):
        with pytest.raises(ExpressionError):
            parse_expression("x1/0")

    def test_position_reported(self):
        with pytest.raises(ExpressionError) as err:
            parse_expression("1 + %")
        assert "offset" in str(err.value)

    def test_restricted_variables(self):
        with pytest.raises(ExpressionError):
            parse_expression("x1 + r", allowed_variables={"r"})

    def test_unbound_variable(self):
        with pytest.raises(ExpressionError):
            evaluate(parse_expression("x1"))


class TestBind:
    def test_constant_folding(self):
        expr = bind(parse_expression("x1/2 + 1/2^i"), i=3)
        assert expr.variables == {"x1"}
        assert evaluate(expr, x1=0.0) == 0.125

    def test_zero_denominator_detected_at_bind(self):
        expr = parse_expression("x1/(i-i)")
        with pytest.raises(ExpressionError):
            bind(expr, i=5)

    def test_bind_keeps_free_variables(self):
        expr = bind(parse_expression("x1 + x2 + i"), i=1)
        assert evaluate(expr, x1=1.0, x2=2.0) == 4.0
