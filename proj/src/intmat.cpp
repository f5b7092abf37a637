#include "k3enr/intmat.hpp"

#include <sstream>
#include <stdexcept>
#include <utility>

namespace k3enr::exactlat {

bool IntMat::is_symmetric() const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j)
            if (at(i, j) != at(j, i)) return false;
    return true;
}

IntMat IntMat::transposed() const {
    IntMat t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
}

std::string IntMat::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i == 0 ? "[" : " ");
        for (std::size_t j = 0; j < cols_; ++j) os << at(i, j).get_str() << (j + 1 < cols_ ? " " : "");
        os << (i + 1 < rows_ ? "\n" : "]");
    }
    return os.str();
}

IntMat mat_mul(const IntMat& a, const IntMat& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("mat_mul: shape mismatch");
    IntMat c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Int& aik = a.at(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c.at(i, j) += aik * b.at(k, j);
        }
    return c;
}

Signature signature_of(const IntMat& gram) {
    if (!gram.is_symmetric()) throw std::invalid_argument("signature_of: matrix not symmetric");
    const std::size_t n = gram.rows();
    std::vector<std::vector<Rat>> m(n, std::vector<Rat>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = Rat(gram.at(i, j));

    Signature sig;
    auto swap_rc = [&](std::size_t a, std::size_t b) {
        std::swap(m[a], m[b]);
        for (std::size_t i = 0; i < n; ++i) std::swap(m[i][a], m[i][b]);
    };

    for (std::size_t k = 0; k < n; ++k) {
        if (m[k][k] == 0) {
            // Prefer a later nonzero diagonal entry; otherwise create one
            // from an off-diagonal entry in row k.
            std::size_t dj = n;
            for (std::size_t j = k + 1; j < n; ++j)
                if (m[j][j] != 0) { dj = j; break; }
            if (dj < n) {
                swap_rc(k, dj);
            } else {
                std::size_t oj = n;
                for (std::size_t j = k + 1; j < n; ++j)
                    if (m[k][j] != 0) { oj = j; break; }
                if (oj == n) { sig.zero++; continue; }
                // row/col k += row/col oj: diagonal becomes 2*m[k][oj] since
                // both diagonals vanish here.
                for (std::size_t t = 0; t < n; ++t) m[k][t] += m[oj][t];
                for (std::size_t t = 0; t < n; ++t) m[t][k] += m[t][oj];
            }
        }
        const Rat pivot = m[k][k];
        if (pivot > 0) sig.positive++; else sig.negative++;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (m[i][k] == 0) continue;
            Rat f = m[i][k] / pivot;
            for (std::size_t t = k; t < n; ++t) m[i][t] -= f * m[k][t];
            for (std::size_t t = k; t < n; ++t) m[t][i] -= f * m[t][k];
        }
    }
    return sig;
}

Int determinant(const IntMat& a) {
    if (!a.is_square()) throw std::invalid_argument("determinant: matrix not square");
    const std::size_t n = a.rows();
    if (n == 0) return 1;
    IntMat m = a;
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m.at(k, k) == 0) {
            std::size_t p = n;
            for (std::size_t i = k + 1; i < n; ++i)
                if (m.at(i, k) != 0) { p = i; break; }
            if (p == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m.at(i, j) = (m.at(k, k) * m.at(i, j) - m.at(i, k) * m.at(k, j)) / prev;
        prev = m.at(k, k);
    }
    return sign > 0 ? m.at(n - 1, n - 1) : -m.at(n - 1, n - 1);
}

namespace {

struct SmithWorker {
    IntMat s, u, v, u_inv, v_inv;

    explicit SmithWorker(const IntMat& a)
        : s(a),
          u(IntMat::identity(a.rows())),
          v(IntMat::identity(a.cols())),
          u_inv(IntMat::identity(a.rows())),
          v_inv(IntMat::identity(a.cols())) {}

    void swap_rows(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t t = 0; t < s.cols(); ++t) std::swap(s.at(i, t), s.at(j, t));
        for (std::size_t t = 0; t < u.cols(); ++t) std::swap(u.at(i, t), u.at(j, t));
        for (std::size_t t = 0; t < u_inv.rows(); ++t) std::swap(u_inv.at(t, i), u_inv.at(t, j));
    }
    void swap_cols(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t t = 0; t < s.rows(); ++t) std::swap(s.at(t, i), s.at(t, j));
        for (std::size_t t = 0; t < v.rows(); ++t) std::swap(v.at(t, i), v.at(t, j));
        for (std::size_t t = 0; t < v_inv.cols(); ++t) std::swap(v_inv.at(i, t), v_inv.at(j, t));
    }
    // row_i += t * row_j
    void add_row(std::size_t i, std::size_t j, const Int& t) {
        if (t == 0) return;
        for (std::size_t c = 0; c < s.cols(); ++c) s.at(i, c) += t * s.at(j, c);
        for (std::size_t c = 0; c < u.cols(); ++c) u.at(i, c) += t * u.at(j, c);
        for (std::size_t r = 0; r < u_inv.rows(); ++r) u_inv.at(r, j) -= t * u_inv.at(r, i);
    }
    // col_i += t * col_j
    void add_col(std::size_t i, std::size_t j, const Int& t) {
        if (t == 0) return;
        for (std::size_t r = 0; r < s.rows(); ++r) s.at(r, i) += t * s.at(r, j);
        for (std::size_t r = 0; r < v.rows(); ++r) v.at(r, i) += t * v.at(r, j);
        for (std::size_t c = 0; c < v_inv.cols(); ++c) v_inv.at(j, c) -= t * v_inv.at(i, c);
    }
    void negate_row(std::size_t i) {
        for (std::size_t c = 0; c < s.cols(); ++c) s.at(i, c) = -s.at(i, c);
        for (std::size_t c = 0; c < u.cols(); ++c) u.at(i, c) = -u.at(i, c);
        for (std::size_t r = 0; r < u_inv.rows(); ++r) u_inv.at(r, i) = -u_inv.at(r, i);
    }
};

}  // namespace

std::vector<Int> SmithDecomposition::divisors() const {
    std::vector<Int> d;
    for (std::size_t k = 0; k < rank; ++k) d.push_back(s.at(k, k));
    return d;
}

SmithDecomposition smith_decomposition(const IntMat& a) {
    SmithWorker w(a);
    const std::size_t nr = a.rows(), nc = a.cols();
    const std::size_t nmin = nr < nc ? nr : nc;
    std::size_t k = 0;
    for (; k < nmin; ++k) {
        // Pivot: smallest absolute value in the trailing block, earliest in
        // row-major order among ties.
        std::size_t pi = nr, pj = nc;
        Int best = 0;
        for (std::size_t i = k; i < nr; ++i)
            for (std::size_t j = k; j < nc; ++j) {
                const Int& e = w.s.at(i, j);
                if (e == 0) continue;
                Int ae = abs(e);
                if (pi == nr || ae < best) { best = ae; pi = i; pj = j; }
            }
        if (pi == nr) break;
        w.swap_rows(k, pi);
        w.swap_cols(k, pj);

        bool clean = false;
        while (!clean) {
            clean = true;
            for (std::size_t i = k + 1; i < nr; ++i) {
                if (w.s.at(i, k) == 0) continue;
                Int q = w.s.at(i, k) / w.s.at(k, k);
                w.add_row(i, k, -q);
                if (w.s.at(i, k) != 0) { w.swap_rows(k, i); clean = false; }
            }
            for (std::size_t j = k + 1; j < nc; ++j) {
                if (w.s.at(k, j) == 0) continue;
                Int q = w.s.at(k, j) / w.s.at(k, k);
                w.add_col(j, k, -q);
                if (w.s.at(k, j) != 0) { w.swap_cols(k, j); clean = false; }
            }
            if (clean) {
                // Divisibility of the trailing block by the pivot.
                for (std::size_t i = k + 1; i < nr && clean; ++i)
                    for (std::size_t j = k + 1; j < nc && clean; ++j)
                        if (w.s.at(i, j) % w.s.at(k, k) != 0) {
                            w.add_row(k, i, 1);
                            clean = false;
                        }
            }
        }
        if (w.s.at(k, k) < 0) w.negate_row(k);
    }
    SmithDecomposition out;
    out.s = std::move(w.s);
    out.u = std::move(w.u);
    out.v = std::move(w.v);
    out.u_inv = std::move(w.u_inv);
    out.v_inv = std::move(w.v_inv);
    out.rank = k;
    return out;
}

IntMat integer_kernel(const IntMat& a) {
    SmithDecomposition d = smith_decomposition(a);
    const std::size_t n = a.cols();
    const std::size_t k = n - d.rank;
    IntMat ker(n, k);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) ker.at(i, j) = d.v.at(i, d.rank + j);
    return ker;
}

std::size_t rank_of(const IntMat& a) { return smith_decomposition(a).rank; }

}  // namespace k3enr::exactlat
