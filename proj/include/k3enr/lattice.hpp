#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "k3enr/intmat.hpp"

namespace k3enr::exactlat {

struct LatticeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An even lattice given by a symmetric Gram matrix with labeled basis.
// Root lattices are stored negative definite (negated Cartan matrices),
// matching the geometric sign convention used throughout.
struct Lattice {
    IntMat gram;
    std::vector<std::string> labels;

    std::size_t rank() const { return gram.rows(); }
    Int pair(const std::vector<Int>& x, const std::vector<Int>& y) const;
    Int norm(const std::vector<Int>& x) const { return pair(x, x); }

    void validate() const;  // symmetry + even diagonal
};

// Expression grammar: U | A<m> | D<n> | E<6|7|8> | (expr) | expr + expr,
// any factor may be twisted by an integer suffix "(m)".
Lattice build_lattice(const std::string& expr);

Lattice direct_sum(const Lattice& a, const Lattice& b);
Lattice twist(const Lattice& a, const Int& m);

struct DiscriminantData {
    std::vector<Int> elementary_divisors;  // d1 | d2 | ... | dn, all positive
    Int det;                               // signed determinant
    std::optional<int> two_elementary_a;   // a with group (Z/2)^a, when 2-elementary

    // Divisors > 1 only (the discriminant-group invariant factors).
    std::vector<Int> group_invariants() const;
};

DiscriminantData smith_invariants(const Lattice& l);
DiscriminantData smith_invariants(const IntMat& gram);

Signature signature(const Lattice& l);
Signature signature(const IntMat& gram);

struct GeneratedLattice {
    std::size_t rank = 0;
    Lattice induced;    // non-degenerate Gram on a basis of the induced lattice
    IntMat projection;  // rank x n: maps generator coordinates to induced basis
    IntMat lift;        // n x rank: induced basis written in generator coordinates

    std::vector<Int> project(const std::vector<Int>& generator_coords) const;
};

// The possibly degenerate Gram matrix of a generating multiset induces a
// non-degenerate lattice on Z^n / ker. Basis choice is deterministic
// (Smith reduction with the earliest minimal pivot).
GeneratedLattice generated_lattice(const IntMat& gram,
                                   const std::vector<std::string>& labels = {});

// s_delta(x) = x - 2 <x,d>/<d,d> d, restricted to <d,d> in {-2, -4}.
// The -4 case requires <x,d> even; otherwise the reflection is not integral.
std::vector<Int> reflect(const std::vector<Int>& x, const std::vector<Int>& delta,
                         const Lattice& l);

std::string lattice_to_json(const Lattice& l);
Lattice lattice_from_json(const std::string& text);

}  // namespace k3enr::exactlat
