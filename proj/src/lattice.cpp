#include "k3enr/lattice.hpp"

#include <cctype>
#include <json.hpp>
#include <sstream>

namespace k3enr::exactlat {

Int Lattice::pair(const std::vector<Int>& x, const std::vector<Int>& y) const {
    const std::size_t n = rank();
    if (x.size() != n || y.size() != n)
        throw LatticeError("pair: coordinate length does not match lattice rank");
    Int acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < n; ++j) acc += x[i] * gram.at(i, j) * y[j];
    }
    return acc;
}

void Lattice::validate() const {
    if (!gram.is_symmetric()) throw LatticeError("lattice Gram matrix is not symmetric");
    for (std::size_t i = 0; i < rank(); ++i)
        if (gram.at(i, i) % 2 != 0) throw LatticeError("lattice is not even");
    if (!labels.empty() && labels.size() != rank())
        throw LatticeError("label count does not match rank");
}

namespace {

// Tree shapes of the simply-laced root systems; entries are the negated
// Cartan matrices (all roots have norm -2).
Lattice root_lattice(char family, int param) {
    auto make = [](int n, const std::vector<std::pair<int, int>>& edges, const std::string& name) {
        Lattice l;
        l.gram = IntMat(n, n);
        for (int i = 0; i < n; ++i) l.gram.at(i, i) = -2;
        for (auto [a, b] : edges) {
            l.gram.at(a, b) = 1;
            l.gram.at(b, a) = 1;
        }
        for (int i = 0; i < n; ++i) l.labels.push_back(name + "." + std::to_string(i + 1));
        return l;
    };
    std::vector<std::pair<int, int>> edges;
    switch (family) {
        case 'A': {
            if (param < 1) throw LatticeError("A_m needs m >= 1");
            for (int i = 0; i + 1 < param; ++i) edges.push_back({i, i + 1});
            return make(param, edges, "A" + std::to_string(param));
        }
        case 'D': {
            if (param < 2) throw LatticeError("D_n needs n >= 2");
            for (int i = 0; i + 2 < param; ++i) edges.push_back({i, i + 1});
            if (param >= 3) edges.push_back({param - 3, param - 1});
            return make(param, edges, "D" + std::to_string(param));
        }
        case 'E': {
            if (param < 6 || param > 8) throw LatticeError("E_k needs k in {6,7,8}");
            // Chain 0..param-2 with the last node attached at position 2.
            for (int i = 0; i + 2 < param; ++i) edges.push_back({i, i + 1});
            edges.push_back({2, param - 1});
            return make(param, edges, "E" + std::to_string(param));
        }
        default:
            throw LatticeError("unknown root family");
    }
}

Lattice hyperbolic_u() {
    Lattice l;
    l.gram = IntMat(2, 2);
    l.gram.at(0, 1) = 1;
    l.gram.at(1, 0) = 1;
    l.labels = {"U.e", "U.f"};
    return l;
}

struct Parser {
    std::string_view s;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    [[noreturn]] void fail(const std::string& what) {
        std::ostringstream os;
        os << "lattice expression parse error at position " << pos << ": " << what;
        if (pos < s.size()) os << " (near '" << s.substr(pos, 8) << "')";
        throw LatticeError(os.str());
    }

    Int parse_int() {
        skip_ws();
        std::size_t start = pos;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start || (pos == start + 1 && !std::isdigit(static_cast<unsigned char>(s[start]))))
            fail("expected integer");
        return Int(std::string(s.substr(start, pos - start)));
    }

    // Try "( int )" as a twist suffix; rolls back if the parenthesis holds
    // anything else.
    std::optional<Int> try_twist() {
        skip_ws();
        std::size_t save = pos;
        if (peek() != '(') return std::nullopt;
        ++pos;
        skip_ws();
        std::size_t numstart = pos;
        if (pos < s.size() && s[pos] == '-') ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == numstart || (s[numstart] == '-' && pos == numstart + 1)) {
            pos = save;
            return std::nullopt;
        }
        Int m(std::string(s.substr(numstart, pos - numstart)));
        skip_ws();
        if (peek() != ')') {
            pos = save;
            return std::nullopt;
        }
        ++pos;
        return m;
    }

    Lattice parse_atom() {
        skip_ws();
        char c = peek();
        if (c == '(') {
            ++pos;
            Lattice inner = parse_expr();
            if (peek() != ')') fail("expected ')'");
            ++pos;
            return inner;
        }
        if (c == 'U') {
            ++pos;
            return hyperbolic_u();
        }
        if (c == 'A' || c == 'D' || c == 'E') {
            ++pos;
            Int p = parse_int();
            if (p <= 0 || !p.fits_sint_p()) fail("bad root-lattice parameter");
            return root_lattice(c, static_cast<int>(p.get_si()));
        }
        fail("expected 'U', 'A<m>', 'D<n>', 'E<k>' or '('");
    }

    Lattice parse_term() {
        Lattice l = parse_atom();
        while (auto m = try_twist()) {
            if (*m == 0) fail("twist multiplier must be nonzero");
            l = twist(l, *m);
        }
        return l;
    }

    Lattice parse_expr() {
        Lattice l = parse_term();
        while (peek() == '+') {
            ++pos;
            l = direct_sum(l, parse_term());
        }
        return l;
    }
};

}  // namespace

Lattice direct_sum(const Lattice& a, const Lattice& b) {
    const std::size_t n = a.rank(), m = b.rank();
    Lattice out;
    out.gram = IntMat(n + m, n + m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out.gram.at(i, j) = a.gram.at(i, j);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) out.gram.at(n + i, n + j) = b.gram.at(i, j);
    out.labels = a.labels;
    out.labels.insert(out.labels.end(), b.labels.begin(), b.labels.end());
    return out;
}

Lattice twist(const Lattice& a, const Int& m) {
    if (m == 0) throw LatticeError("twist multiplier must be nonzero");
    Lattice out = a;
    for (std::size_t i = 0; i < out.rank(); ++i)
        for (std::size_t j = 0; j < out.rank(); ++j) out.gram.at(i, j) *= m;
    for (auto& lbl : out.labels) lbl += "(" + m.get_str() + ")";
    return out;
}

Lattice build_lattice(const std::string& expr) {
    Parser p{expr};
    Lattice l = p.parse_expr();
    if (!p.eof()) p.fail("trailing input");
    l.validate();
    return l;
}

std::vector<Int> DiscriminantData::group_invariants() const {
    std::vector<Int> out;
    for (const Int& d : elementary_divisors)
        if (d > 1) out.push_back(d);
    return out;
}

DiscriminantData smith_invariants(const IntMat& gram) {
    if (!gram.is_symmetric()) throw LatticeError("smith_invariants: Gram not symmetric");
    Int det = determinant(gram);
    if (det == 0)
        throw LatticeError(
            "smith_invariants: degenerate Gram matrix; use generated_lattice to pass to the "
            "induced non-degenerate lattice first");
    DiscriminantData out;
    out.det = det;
    out.elementary_divisors = smith_decomposition(gram).divisors();
    bool two_elem = true;
    int a = 0;
    for (const Int& d : out.elementary_divisors) {
        if (d == 1) continue;
        if (d == 2) ++a;
        else two_elem = false;
    }
    if (two_elem) out.two_elementary_a = a;
    return out;
}

DiscriminantData smith_invariants(const Lattice& l) { return smith_invariants(l.gram); }

Signature signature(const IntMat& gram) { return signature_of(gram); }
Signature signature(const Lattice& l) { return signature_of(l.gram); }

std::vector<Int> GeneratedLattice::project(const std::vector<Int>& g) const {
    if (g.size() != projection.cols())
        throw LatticeError("project: coordinate length mismatch");
    std::vector<Int> out(rank, 0);
    for (std::size_t i = 0; i < rank; ++i)
        for (std::size_t j = 0; j < g.size(); ++j) out[i] += projection.at(i, j) * g[j];
    return out;
}

GeneratedLattice generated_lattice(const IntMat& gram, const std::vector<std::string>& labels) {
    if (!gram.is_symmetric()) throw LatticeError("generated_lattice: Gram not symmetric");
    const std::size_t n = gram.rows();
    IntMat kernel = integer_kernel(gram);
    const std::size_t k = kernel.cols();
    const std::size_t r = n - k;

    GeneratedLattice out;
    out.rank = r;
    if (k == 0) {
        out.induced.gram = gram;
        out.induced.labels = labels;
        out.projection = IntMat::identity(n);
        out.lift = IntMat::identity(n);
        return out;
    }

    // Smith form of the kernel basis: kernel * V = Uinv * S, so the first k
    // columns of Uinv span ker (S has unit diagonal: integer kernels are
    // saturated). The last r columns of Uinv complete them to a basis of Z^n;
    // the last r rows of U give the projection.
    SmithDecomposition d = smith_decomposition(kernel);
    if (d.rank != k) throw LatticeError("generated_lattice: kernel basis not of full rank");
    for (std::size_t i = 0; i < k; ++i)
        if (d.s.at(i, i) != 1)
            throw LatticeError("generated_lattice: integer kernel unexpectedly not saturated");

    out.lift = IntMat(n, r);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < r; ++j) out.lift.at(i, j) = d.u_inv.at(i, k + j);
    out.projection = IntMat(r, n);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < n; ++j) out.projection.at(i, j) = d.u.at(k + i, j);

    out.induced.gram = mat_mul(mat_mul(out.lift.transposed(), gram), out.lift);
    for (std::size_t i = 0; i < r; ++i) out.induced.labels.push_back("b" + std::to_string(i + 1));
    out.induced.validate();
    if (determinant(out.induced.gram) == 0)
        throw LatticeError("generated_lattice: induced Gram still degenerate");
    return out;
}

std::vector<Int> reflect(const std::vector<Int>& x, const std::vector<Int>& delta,
                         const Lattice& l) {
    Int dd = l.pair(delta, delta);
    if (dd != -2 && dd != -4)
        throw LatticeError("reflect: <delta,delta> must be -2 or -4, got " + dd.get_str());
    Int xd = l.pair(x, delta);
    Int coeff;
    if (dd == -2) {
        coeff = xd;
    } else {
        if (xd % 2 != 0)
            throw LatticeError("reflect: non-integral reflection, odd pairing " + xd.get_str() +
                               " with a (-4)-vector");
        coeff = xd / 2;
    }
    std::vector<Int> out(x);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += coeff * delta[i];
    return out;
}

std::string lattice_to_json(const Lattice& l) {
    nlohmann::json j;
    j["labels"] = l.labels;
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < l.rank(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t jx = 0; jx < l.rank(); ++jx) {
            const Int& e = l.gram.at(i, jx);
            if (!e.fits_slong_p()) throw LatticeError("lattice_to_json: entry out of range");
            row.push_back(static_cast<long long>(e.get_si()));
        }
        rows.push_back(row);
    }
    j["gram"] = rows;
    return j.dump(2);
}

Lattice lattice_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Lattice l;
    l.labels = j.at("labels").get<std::vector<std::string>>();
    const auto& rows = j.at("gram");
    const std::size_t n = rows.size();
    l.gram = IntMat(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t jx = 0; jx < n; ++jx)
            l.gram.at(i, jx) = Int(rows[i][jx].get<long>());
    l.validate();
    return l;
}

}  // namespace k3enr::exactlat
