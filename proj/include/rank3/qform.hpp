#pragma once
// Binary quadratic forms of negative discriminant: reduction, Gauss composition,
// brute-force class groups for small |D|, 3-rank certification, Scholz reflection.

#include "rank3/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rank3 {

struct QuadForm {
    Int a, b, c;

    Int disc() const { return b * b - 4 * a * c; }
    bool operator==(const QuadForm& o) const { return a == o.a && b == o.b && c == o.c; }
    bool operator<(const QuadForm& o) const {
        if (a != o.a) return a < o.a;
        if (b != o.b) return b < o.b;
        return c < o.c;
    }
};

bool is_primitive(const QuadForm& f);

// Unique reduced representative; requires D < 0, a > 0, primitive.
QuadForm reduce_form(const QuadForm& f);

// Principal (identity) form of discriminant D < 0.
QuadForm principal_form(const Int& D);

// Gauss composition (reduced output); discriminants must agree.
QuadForm compose(const QuadForm& f1, const QuadForm& f2);

QuadForm form_pow(const QuadForm& f, const Int& e);  // e may be negative

inline QuadForm form_inverse(const QuadForm& f) { return reduce_form({f.a, -f.b, f.c}); }

bool is_principal(const QuadForm& f);

// A positive annihilating exponent of the class of f (a multiple of its order) via
// baby-step giant-step, or nothing if it exceeds the bound.
std::optional<Int> form_order(const QuadForm& f, const Int& bound = Int(1) << 30);

struct SmallClassGroup {
    Int D;
    std::vector<QuadForm> forms;          // all reduced forms, lexicographic (a, b)
    std::vector<Int> elementary_divisors;  // d1 | d2 | ... , product = h
    int rank3 = 0;
    Int h() const { return Int(static_cast<long>(forms.size())); }
};

// Enumerate + structure for negative discriminant D (|D| <= budget).
SmallClassGroup class_group_small(const Int& D, const Int& budget = Int(100000000));

struct Rank3Certificate {
    Int D;
    std::vector<QuadForm> forms;
    int rank = 0;
    std::vector<std::string> transcript;            // per-check lines
    std::optional<std::vector<int>> witness_relation;  // set on failure
    bool ok = false;
};

// Verify F_i^3 principal and all nonzero ternary combinations (up to inversion)
// non-principal; on failure the witness relation is recorded.
Rank3Certificate rank3_certificate(const Int& D, const std::vector<QuadForm>& forms);

// 3-rank of the (narrow) class group of positive discriminant D via reduced
// indefinite form cycles. Valid for small D only.
int rank3_real(const Int& D);

// Scholz reflection check: rk3 Cl(Q(sqrt(-3d))) - rk3 Cl(Q(sqrt(d))) for squarefree d > 1.
// Returns the difference (expected in {0, 1}).
int scholz_check(const Int& d);

}  // namespace rank3
