#include "scartower/io.hpp"

#include <fstream>

namespace scartower {

namespace {

Json cjson(cplx z) { return Json::array({z.real(), z.imag()}); }

cplx from_cjson(const Json& j) {
    if (!j.is_array() || j.size() != 2) throw DomainError("complex number must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

Json vec_to_json(const Vec& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(cjson(v[i]));
    return a;
}

Vec vec_from_json(const Json& j) {
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = from_cjson(j[i]);
    return v;
}

}  // namespace

Json matrix_to_json(const Mat& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(cjson(m(r, c)));
        rows.push_back(row);
    }
    return rows;
}

Mat matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw DomainError("matrix must be a non-empty array of rows");
    Mat m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(j[0].size()));
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (j[r].size() != j[0].size()) throw DimensionError("ragged matrix rows");
        for (std::size_t c = 0; c < j[r].size(); ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = from_cjson(j[r][c]);
    }
    return m;
}

Json state_to_json(const StateVector& s) {
    return {{"site_dims", s.dims()}, {"amplitudes", vec_to_json(s.amps())}};
}

StateVector state_from_json(const Json& j) {
    auto dims = j.at("site_dims").get<std::vector<int>>();
    check_size(dims);
    Vec amps = vec_from_json(j.at("amplitudes"));
    return StateVector(std::move(dims), std::move(amps));
}

Json mps_to_json(const MPS& mps) {
    Json sites = Json::array();
    for (const auto& t : mps.tensors) {
        Json phys = Json::array();
        for (const auto& m : t.data) phys.push_back(matrix_to_json(m));
        sites.push_back({{"site", t.site}, {"tensor", phys}});
    }
    Json j = {{"boundary", boundary_name(mps.boundary)}, {"sites", sites}};
    if (mps.boundary == Boundary::open) {
        j["left"] = vec_to_json(mps.left);
        j["right"] = vec_to_json(mps.right);
    }
    return j;
}

MPS mps_from_json(const Json& j) {
    MPS mps;
    mps.boundary = parse_boundary(j.at("boundary").get<std::string>());
    for (const auto& s : j.at("sites")) {
        MPSTensor t;
        t.site = s.at("site").get<int>();
        for (const auto& m : s.at("tensor")) t.data.push_back(matrix_from_json(m));
        mps.tensors.push_back(std::move(t));
    }
    if (mps.boundary == Boundary::open) {
        mps.left = vec_from_json(j.at("left"));
        mps.right = vec_from_json(j.at("right"));
    }
    mps.validate();
    return mps;
}

Json mpu_to_json(const MPU& u) {
    Json outs = Json::array();
    for (int o = 0; o < u.d; ++o) {
        Json ins = Json::array();
        for (int i = 0; i < u.d; ++i) ins.push_back(matrix_to_json(u.at(o, i)));
        outs.push_back(ins);
    }
    return {{"name", u.name}, {"phys_dim", u.d}, {"bond_dim", u.chi}, {"tensor", outs}};
}

MPU mpu_from_json(const Json& j) {
    MPU u;
    u.name = j.value("name", std::string("file"));
    u.d = j.at("phys_dim").get<int>();
    u.chi = j.at("bond_dim").get<int>();
    const Json& t = j.at("tensor");
    if (t.size() != static_cast<std::size_t>(u.d)) throw DimensionError("MPU tensor needs phys_dim output slices");
    for (int o = 0; o < u.d; ++o) {
        if (t[o].size() != static_cast<std::size_t>(u.d)) throw DimensionError("MPU tensor needs phys_dim input slices");
        for (int i = 0; i < u.d; ++i) u.data.push_back(matrix_from_json(t[o][i]));
    }
    u.validate();
    return u;
}

Json correction_table_to_json(const CorrectionTable& t) {
    Json entries = Json::array();
    for (const auto& e : t.entries) {
        Json x = {{"pauli", {{"a", e.pauli.a}, {"b", e.pauli.b}}},
                  {"correctable", e.correctable},
                  {"residual", e.residual},
                  {"gluing_residual", e.gluing_residual}};
        if (e.correctable) {
            x["side"] = e.side == PushSide::left ? "left" : "right";
            x["pushed"] = {{"a", e.pushed.a}, {"b", e.pushed.b}};
            x["phys_correction"] = matrix_to_json(e.phys_correction);
        }
        entries.push_back(x);
    }
    return {{"name", t.name}, {"all_correctable", t.all_correctable()}, {"entries", entries}};
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw DomainError(path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write " + path);
    out << j.dump(2) << '\n';
}

}  // namespace scartower
