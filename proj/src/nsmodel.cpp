#include "k3enr/nsmodel.hpp"

#include <json.hpp>

namespace k3enr::ns {

NSClass NSModel::make_class(std::vector<Int> raw) const {
    if (raw.size() != 42) throw NSError("NS class needs 42 generator coordinates");
    NSClass c;
    c.reduced = induced.project(raw);
    c.raw = std::move(raw);
    return c;
}

NSClass NSModel::generator(int index) const {
    std::vector<Int> raw(42, 0);
    raw[index] = 1;
    return make_class(std::move(raw));
}

Int NSModel::pair_raw(const std::vector<Int>& x, const std::vector<Int>& y) const {
    Int acc = 0;
    for (int i = 0; i < 42; ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < 42; ++j) acc += x[i] * gram42.at(i, j) * y[j];
    }
    return acc;
}

Int NSModel::pair(const NSClass& x, const NSClass& y) const {
    return induced.induced.pair(x.reduced, y.reduced);
}

NSModel build_ns_model(const pg4::Plane& plane) {
    NSModel m;
    m.plane = plane;
    m.gram42 = IntMat(42, 42);
    for (int p = 0; p < 21; ++p) m.labels.push_back("E" + std::to_string(p));
    for (int l = 0; l < 21; ++l) m.labels.push_back("L" + std::to_string(l));
    for (int i = 0; i < 42; ++i) m.gram42.at(i, i) = -2;
    for (int p = 0; p < 21; ++p)
        for (int l = 0; l < 21; ++l)
            if (plane.incident(p, l)) {
                m.gram42.at(NSModel::e_index(p), NSModel::l_index(l)) = 1;
                m.gram42.at(NSModel::l_index(l), NSModel::e_index(p)) = 1;
            }
    m.induced = exactlat::generated_lattice(m.gram42, m.labels);
    if (m.induced.rank != 22) throw NSError("NS model: induced rank != 22");
    exactlat::DiscriminantData d = exactlat::smith_invariants(m.induced.induced);
    if (d.det != -4) throw NSError("NS model: determinant != -4, got " + d.det.get_str());
    if (!d.two_elementary_a || *d.two_elementary_a != 2)
        throw NSError("NS model: discriminant group is not (Z/2)^2");
    exactlat::Signature sig = exactlat::signature(m.induced.induced);
    if (!(sig.positive == 1 && sig.negative == 21 && sig.zero == 0))
        throw NSError("NS model: signature != (1,21)");
    return m;
}

NSClass class_h(const NSModel& model, int line) {
    if (line < 0 || line >= 21) throw NSError("class_h: bad line");
    std::vector<Int> raw(42, 0);
    raw[NSModel::l_index(line)] = 2;
    for (int p = 0; p < 21; ++p)
        if (model.plane.incident(p, line)) raw[NSModel::e_index(p)] = 1;
    return model.make_class(std::move(raw));
}

NSClass minus_four_vector(const NSModel& model, const pg4::Hyperoval& s) {
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j)
            for (int k = j + 1; k < 6; ++k)
                if (model.plane.incident(s[k], model.plane.line_through(s[i], s[j])))
                    throw NSError("minus_four_vector: points not in general position");
    NSClass h = class_h(model, 0);
    std::vector<Int> raw(42, 0);
    for (int i = 0; i < 42; ++i) raw[i] = 2 * h.raw[i];
    for (int q : s) raw[NSModel::e_index(q)] -= 1;
    return model.make_class(std::move(raw));
}

std::vector<NSClass> orthogonal_filter(const NSModel& model, const std::vector<NSClass>& classes,
                                       const std::vector<std::string>& curve_labels) {
    std::vector<int> idx;
    for (const auto& lbl : curve_labels) idx.push_back(generator_index(model, lbl));
    std::vector<NSClass> out;
    for (const NSClass& c : classes) {
        bool keep = true;
        for (int g : idx) {
            Int acc = 0;
            for (int j = 0; j < 42; ++j)
                if (c.raw[j] != 0) acc += c.raw[j] * model.gram42.at(j, g);
            if (acc != 0) { keep = false; break; }
        }
        if (keep) out.push_back(c);
    }
    return out;
}

int generator_index(const NSModel& model, const std::string& label) {
    for (int i = 0; i < 42; ++i)
        if (model.labels[i] == label) return i;
    throw NSError("unknown generator label: " + label);
}

std::vector<NSClass> all_minus_four_vectors(const NSModel& model,
                                            const std::vector<pg4::Hyperoval>& hyps) {
    std::vector<NSClass> out;
    out.reserve(hyps.size());
    for (const auto& h : hyps) out.push_back(minus_four_vector(model, h));
    return out;
}

std::string ns_to_json(const NSModel& model, const std::vector<pg4::Hyperoval>& hyps) {
    nlohmann::json j;
    j["labels"] = model.labels;
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < 42; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int k = 0; k < 42; ++k) row.push_back(static_cast<long>(model.gram42.at(i, k).get_si()));
        rows.push_back(row);
    }
    j["gram42"] = rows;
    nlohmann::json classes = nlohmann::json::array();
    for (const auto& h : hyps) {
        NSClass c = minus_four_vector(model, h);
        nlohmann::json e;
        e["hyperoval"] = h;
        nlohmann::json red = nlohmann::json::array();
        for (const Int& x : c.reduced) red.push_back(static_cast<long>(x.get_si()));
        e["reduced"] = red;
        classes.push_back(e);
    }
    j["minus_four_classes"] = classes;
    return j.dump(2);
}

}  // namespace k3enr::ns
