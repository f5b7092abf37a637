#pragma once

// Small independent oracles used by the test suites. These deliberately use
// naive algorithms (cofactor expansion, direct enumeration) so they share no
// code path with the library implementations they check.

#include <random>
#include <vector>

#include "k3enr/intmat.hpp"

namespace oracles {

using k3enr::exactlat::Int;
using k3enr::exactlat::IntMat;

// Cofactor-expansion determinant, O(n!), fine for n <= 10.
inline Int naive_det(const IntMat& m) {
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    if (n == 1) return m.at(0, 0);
    Int acc = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (m.at(0, j) == 0) continue;
        IntMat minor(n - 1, n - 1);
        for (std::size_t r = 1; r < n; ++r) {
            std::size_t cc = 0;
            for (std::size_t c = 0; c < n; ++c) {
                if (c == j) continue;
                minor.at(r - 1, cc++) = m.at(r, c);
            }
        }
        Int term = m.at(0, j) * naive_det(minor);
        if (j % 2 == 0) acc += term;
        else acc -= term;
    }
    return acc;
}

inline IntMat leading_minor(const IntMat& m, std::size_t k) {
    IntMat out(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) out.at(i, j) = m.at(i, j);
    return out;
}

// Negative definiteness via alternating signs of leading principal minors.
inline bool naive_negative_definite(const IntMat& m) {
    for (std::size_t k = 1; k <= m.rows(); ++k) {
        Int d = naive_det(leading_minor(m, k));
        if (k % 2 == 1 && d >= 0) return false;
        if (k % 2 == 0 && d <= 0) return false;
    }
    return true;
}

// Random unimodular matrix as a product of elementary row additions and swaps.
inline IntMat random_unimodular(std::size_t n, std::mt19937_64& rng, int steps = 30) {
    IntMat u = IntMat::identity(n);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(n) - 1);
    std::uniform_int_distribution<int> coef(-2, 2);
    for (int s = 0; s < steps; ++s) {
        int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        int t = coef(rng);
        if (t == 0) t = 1;
        for (std::size_t c = 0; c < n; ++c) u.at(i, c) += Int(t) * u.at(j, c);
    }
    return u;
}

inline IntMat congruent(const IntMat& g, const IntMat& u) {
    using k3enr::exactlat::mat_mul;
    return mat_mul(mat_mul(u, g), u.transposed());
}

}  // namespace oracles
