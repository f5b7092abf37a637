#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

namespace k3enr::exactlat {

using Int = mpz_class;
using Rat = mpq_class;

// Dense row-major matrix of arbitrary-precision integers.
class IntMat {
public:
    IntMat() = default;
    IntMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static IntMat identity(std::size_t n) {
        IntMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Int& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool operator==(const IntMat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    bool is_symmetric() const;
    bool is_square() const { return rows_ == cols_; }

    IntMat transposed() const;
    std::string to_string() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Int> data_;
};

IntMat mat_mul(const IntMat& a, const IntMat& b);

struct Signature {
    int positive = 0;
    int negative = 0;
    int zero = 0;

    bool operator==(const Signature& o) const {
        return positive == o.positive && negative == o.negative && zero == o.zero;
    }
};

// Exact signature of a symmetric integer matrix via rational congruence
// transformations. No floating point.
Signature signature_of(const IntMat& gram);

// Exact determinant (Bareiss fraction-free elimination).
Int determinant(const IntMat& a);

// u * a * v = s with u, v unimodular and s in Smith normal form.
struct SmithDecomposition {
    IntMat s, u, v, u_inv, v_inv;
    std::size_t rank = 0;

    // Nonzero diagonal entries d1 | d2 | ... | dr, all positive.
    std::vector<Int> divisors() const;
};

SmithDecomposition smith_decomposition(const IntMat& a);

// Columns form a basis of {x in Z^n : a x = 0}. The lattice they span is
// saturated (an integer kernel always is).
IntMat integer_kernel(const IntMat& a);

std::size_t rank_of(const IntMat& a);

}  // namespace k3enr::exactlat
