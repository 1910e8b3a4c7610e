import numpy as np
import pytest

from nophase.errors import DomainError
from nophase.expr import compile_expression


class TestCompileExpression:
    def test_polynomial(self):
        f = compile_expression("1 + 2*t - t**2")
        t = np.array([-1.0, 0.0, 2.0])
        assert np.allclose(f(t), 1 + 2 * t - t ** 2)

    def test_functions_and_pi(self):
        f = compile_expression("exp(-t) * sin(pi * t) + sech(t) + sqrt(t+2)")
        t = np.linspace(-1.0, 1.0, 11)
        ref = (np.exp(-t) * np.sin(np.pi * t) + 1.0 / np.cosh(t)
               + np.sqrt(t + 2))
        assert np.allclose(f(t), ref, atol=1e-15)

    def test_constant_broadcasts(self):
        f = compile_expression("1 + pi*0")
        t = np.linspace(0, 1, 7)
        out = f(t)
        assert out.shape == t.shape
        assert np.all(out == 1.0)

    def test_scalar_input(self):
        f = compile_expression("cos(t)")
        assert f(0.0) == pytest.approx(1.0)

    def test_unary_minus(self):
        f = compile_expression("-t + +2")
        assert f(3.0) == pytest.approx(-1.0)

    @pytest.mark.parametrize("bad", [
        "__import__('os')",
        "t.__class__",
        "lambda u: u",
        "open('x')",
        "t if t else 0",
        "foo(t)",
        "y + 1",
        "t @ t",
        "'str'",
        "[1, 2]",
    ])
    def test_rejects_disallowed(self, bad):
        with pytest.raises(DomainError):
            compile_expression(bad)

    def test_rejects_syntax_error(self):
        with pytest.raises(DomainError):
            compile_expression("1 +")
