// Copyright 2026 the smecorr authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "smecorr/errors.hpp"
#include "smecorr/model.hpp"

// Recursive-descent evaluator for operator expressions. Values are either
// complex scalars or matrices; primitives carry their own dimension.

namespace smecorr {

namespace {

struct Value {
    bool is_matrix = false;
    cxd scalar{0.0, 0.0};
    ComplexMatrix matrix;

    static Value of(cxd s) {
        Value v;
        v.scalar = s;
        return v;
    }
    static Value of(ComplexMatrix m) {
        Value v;
        v.is_matrix = true;
        v.matrix = std::move(m);
        return v;
    }
};

[[noreturn]] void fail(const std::string& msg) { throw Error("model", "operator expression: " + msg); }

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    Value parse() {
        Value v = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input at '" + rest() + "'");
        return v;
    }

private:
    const std::string& text_;
    std::size_t pos_ = 0;

    std::string rest() const { return text_.substr(pos_, 12); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool consume(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!consume(c)) fail(std::string("expected '") + c + "' at '" + rest() + "'");
    }

    Value expr() {
        Value acc = term();
        for (;;) {
            skip_ws();
            if (consume('+'))
                acc = add(acc, term(), +1.0);
            else if (consume('-'))
                acc = add(acc, term(), -1.0);
            else
                return acc;
        }
    }

    Value term() {
        Value acc = unary();
        for (;;) {
            skip_ws();
            if (consume('*'))
                acc = mul(acc, unary());
            else if (consume('/'))
                acc = div(acc, unary());
            else
                return acc;
        }
    }

    Value unary() {
        skip_ws();
        if (consume('-')) {
            Value v = unary();
            if (v.is_matrix) {
                v.matrix *= cxd(-1.0, 0.0);
                return v;
            }
            v.scalar = -v.scalar;
            return v;
        }
        return primary();
    }

    Value primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        const char c = text_[pos_];
        if (consume('(')) {
            Value v = expr();
            expect(')');
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            char* end = nullptr;
            const double d = std::strtod(text_.c_str() + pos_, &end);
            pos_ = static_cast<std::size_t>(end - text_.c_str());
            return Value::of(cxd(d, 0.0));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return named();
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        return text_.substr(start, pos_ - start);
    }

    long int_arg() {
        skip_ws();
        Value v = expr();
        if (v.is_matrix || v.scalar.imag() != 0.0) fail("expected an integer argument");
        const double d = v.scalar.real();
        const long n = std::lround(d);
        if (std::abs(d - static_cast<double>(n)) > 1e-9) fail("expected an integer argument");
        return n;
    }

    Value named() {
        const std::string name = ident();
        if (name == "i") return Value::of(cxd(0.0, 1.0));
        if (name == "pauli_x")
            return Value::of(ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}));
        if (name == "pauli_y")
            return Value::of(ComplexMatrix::from_rows({{0.0, cxd(0.0, -1.0)}, {cxd(0.0, 1.0), 0.0}}));
        if (name == "pauli_z")
            return Value::of(ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}}));
        if (name == "identity") {
            expect('(');
            const long n = int_arg();
            expect(')');
            if (n < 1) fail("identity dimension must be >= 1");
            return Value::of(ComplexMatrix::identity(static_cast<std::size_t>(n)));
        }
        if (name == "annihilation") {
            expect('(');
            const long n = int_arg();
            expect(')');
            if (n < 1) fail("annihilation dimension must be >= 1");
            ComplexMatrix a(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
            for (long k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
            return Value::of(std::move(a));
        }
        if (name == "projector") {
            expect('(');
            const long i = int_arg();
            expect(',');
            const long j = int_arg();
            expect(',');
            const long n = int_arg();
            expect(')');
            if (n < 1 || i < 0 || j < 0 || i >= n || j >= n)
                fail("projector indices out of range");
            ComplexMatrix p(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
            p(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = 1.0;
            return Value::of(std::move(p));
        }
        if (name == "adjoint") {
            expect('(');
            Value v = expr();
            expect(')');
            if (v.is_matrix) return Value::of(v.matrix.adjoint());
            return Value::of(std::conj(v.scalar));
        }
        if (name == "sqrt") {
            expect('(');
            Value v = expr();
            expect(')');
            if (v.is_matrix) fail("sqrt applies to scalars only");
            return Value::of(std::sqrt(v.scalar));
        }
        fail("unknown primitive '" + name + "'");
    }

    static Value add(const Value& a, const Value& b, double sign) {
        if (a.is_matrix != b.is_matrix) fail("cannot add a scalar and a matrix");
        if (!a.is_matrix) return Value::of(a.scalar + sign * b.scalar);
        if (!a.matrix.same_shape(b.matrix)) fail("dimension mismatch in sum");
        ComplexMatrix m = a.matrix;
        if (sign > 0)
            m += b.matrix;
        else
            m -= b.matrix;
        return Value::of(std::move(m));
    }

    static Value mul(const Value& a, const Value& b) {
        if (!a.is_matrix && !b.is_matrix) return Value::of(a.scalar * b.scalar);
        if (!a.is_matrix) return Value::of(a.scalar * b.matrix);
        if (!b.is_matrix) return Value::of(b.scalar * a.matrix);
        if (a.matrix.cols() != b.matrix.rows()) fail("dimension mismatch in product");
        return Value::of(a.matrix * b.matrix);
    }

    static Value div(const Value& a, const Value& b) {
        if (b.is_matrix) fail("division by a matrix");
        if (b.scalar == cxd(0.0, 0.0)) fail("division by zero");
        if (a.is_matrix) return Value::of(a.matrix * (cxd(1.0, 0.0) / b.scalar));
        return Value::of(a.scalar / b.scalar);
    }
};

}  // namespace

ComplexMatrix build_operator(const std::string& expr) {
    Value v = Parser(expr).parse();
    if (!v.is_matrix)
        throw Error("model", "operator expression: result is a scalar, not a matrix");
    return v.matrix;
}

ComplexMatrix build_operator(const std::string& expr, std::size_t dim_hint) {
    Value v = Parser(expr).parse();
    if (v.is_matrix) return v.matrix;
    ComplexMatrix m = ComplexMatrix::identity(dim_hint);
    m *= v.scalar;
    return m;
}

}  // namespace smecorr
