import numpy as np
import pytest

from mipfront.expr import (
    BinOp,
    EvaluationError,
    ExpressionSyntaxError,
    Neg,
    Pow,
    Var,
    compile_expression,
    evaluate,
    format_expression,
    parse_expression,
    substitute,
    variables,
)
from mipfront.problems import BUILTIN_DOCUMENTS


def test_circle_constraint_at_front_point():
    e = parse_expression("(x1-4)^2 + (x2-4)^2 - 16")
    assert evaluate(e, {"x1": 0, "x2": 4}) == 0


def test_rocket_f1_constant_term():
    e = parse_expression(BUILTIN_DOCUMENTS["rocket"]["objectives"][0])
    assert evaluate(e, {"x1": 0, "x2": 0, "x3": 0, "x4": 0}) == pytest.approx(0.692, abs=1e-12)


@pytest.mark.parametrize("text", ["x1 + * 2", "", "(x1", "x1 )", "2 ^ x1", "x1 ^ 2.5", "x1 $ 2"])
def test_syntax_errors(text):
    with pytest.raises(ExpressionSyntaxError):
        parse_expression(text)


def test_syntax_error_position():
    with pytest.raises(ExpressionSyntaxError) as exc:
        parse_expression("x1 + * 2")
    assert exc.value.position == 5


def test_linear_constraint_value():
    assert evaluate(parse_expression("3*x1+2*x2+3*x3"), {"x1": 6, "x2": 0, "x3": 0}) == 18


def test_zero_power():
    e = parse_expression("x1^0")
    for v in (-3.0, 0.0, 2.5):
        assert evaluate(e, {"x1": v}) == 1


def test_division_by_zero():
    with pytest.raises(EvaluationError):
        evaluate(parse_expression("1/x1"), {"x1": 0})


def test_missing_variable():
    with pytest.raises(EvaluationError):
        evaluate(parse_expression("x1 + y"), {"x1": 1})


def test_precedence():
    assert parse_expression("-x^2") == Neg(Pow(Var("x"), 2))
    assert evaluate(parse_expression("-x^2"), {"x": 3}) == -9
    assert evaluate(parse_expression("2+3*4"), {}) == 14
    assert evaluate(parse_expression("8/4/2"), {}) == 1
    assert evaluate(parse_expression("5-3-1"), {}) == 1
    assert isinstance(parse_expression("a-b-c"), BinOp)


def test_variables_and_substitute():
    e = parse_expression("x1*y + y^2")
    assert variables(e) == {"x1", "y"}
    s = substitute(e, {"y": parse_expression("x1 / 5")})
    assert variables(s) == {"x1"}
    assert evaluate(s, {"x1": 5}) == pytest.approx(6.0)


def test_compile_matches_evaluate_on_arrays():
    e = parse_expression("(a - 2)^2 - a*b / 4 + 1")
    f = compile_expression(e, ("a", "b"))
    a = np.linspace(-1, 3, 7)
    b = np.linspace(0, 2, 7)
    assert np.allclose(f(a, b), evaluate(e, {"a": a, "b": b}))


@pytest.mark.parametrize("i", range(4))
def test_rocket_round_trip(i):
    e = parse_expression(BUILTIN_DOCUMENTS["rocket"]["objectives"][i])
    assert parse_expression(format_expression(e)) == e


def _rocket_reference(x1, x2, x3, x4):
    # coefficient tables typed independently of the expression strings
    f1 = (0.692 + 0.477 * x1 - 0.687 * x4 - 0.08 * x3 - 0.065 * x2 - 0.167 * x1 * x1 - 0.0129 * x1 * x4
          + 0.0796 * x4 * x4 - 0.0634 * x1 * x3 - 0.0257 * x3 * x4 + 0.0877 * x3 * x3 - 0.0521 * x1 * x2
          + 0.00156 * x2 * x4 + 0.00198 * x2 * x3 + 0.0184 * x2 * x2)
    f2 = (0.37 - 0.205 * x1 + 0.0307 * x4 + 0.108 * x3 + 1.019 * x2 - 0.135 * x1 * x1 + 0.0141 * x1 * x4
          + 0.0998 * x4 * x4 + 0.208 * x1 * x3 - 0.0301 * x3 * x4 - 0.226 * x3 * x3 + 0.353 * x1 * x2
          - 0.0497 * x2 * x3 - 0.423 * x2 * x2 + 0.202 * x1 * x1 * x4 - 0.281 * x1 * x1 * x3
          - 0.342 * x1 * x4 * x4 - 0.245 * x3 * x4 * x4 + 0.281 * x3 * x3 * x4 - 0.184 * x1 * x2 * x2
          + 0.281 * x1 * x3 * x4)
    f3 = (0.153 - 0.322 * x1 + 0.396 * x4 + 0.424 * x3 + 0.0226 * x2 + 0.175 * x1 * x1 + 0.0185 * x1 * x4
          - 0.0701 * x4 * x4 - 0.251 * x1 * x3 + 0.179 * x3 * x4 + 0.015 * x3 * x3 + 0.0134 * x1 * x2
          + 0.0296 * x2 * x4 + 0.0752 * x2 * x3 + 0.0192 * x2 * x2)
    f4 = (0.758 + 0.358 * x1 - 0.807 * x4 + 0.0925 * x3 - 0.0468 * x2 - 0.172 * x1 * x1 + 0.0106 * x1 * x4
          + 0.0697 * x4 * x4 - 0.146 * x1 * x3 - 0.0416 * x3 * x4 + 0.102 * x3 * x3 - 0.0694 * x1 * x2
          - 0.00503 * x2 * x4 + 0.0151 * x2 * x3 + 0.0173 * x2 * x2)
    return f1, f2, f3, f4


def test_rocket_polynomials_match_reference():
    rng = np.random.default_rng(7)
    exprs = [parse_expression(t) for t in BUILTIN_DOCUMENTS["rocket"]["objectives"]]
    for x in rng.random((100, 4)):
        env = dict(zip(("x1", "x2", "x3", "x4"), x))
        ref = _rocket_reference(*x)
        for e, r in zip(exprs, ref):
            assert evaluate(e, env) == pytest.approx(r, abs=1e-12)
