#include <ionet/serialize.hpp>

#include <fstream>

namespace ionet {

namespace {

const char *method_name(SolveMethod m) {
    switch (m) {
    case SolveMethod::direct: return "direct";
    case SolveMethod::power: return "power";
    case SolveMethod::chain: return "chain";
    }
    return "direct";
}

} // namespace

nlohmann::json to_json(const InfluenceResult &r) {
    nlohmann::json j;
    j["v"] = std::vector<double>(r.v.data(), r.v.data() + r.v.size());
    j["method"] = method_name(r.method);
    j["iterations"] = r.iterations;
    j["residual"] = r.residual;
    return j;
}

nlohmann::json to_json(const BoundCertificate &c) {
    nlohmann::json j;
    j["theorem"] = c.theorem;
    j["inputs"] = c.inputs;
    j["bound"] = c.bound;
    j["measured"] = c.measured;
    j["holds"] = c.holds;
    return j;
}

nlohmann::json to_json(const TrialReport &r) {
    nlohmann::json j;
    j["trials"] = r.trials;
    j["alpha"] = r.alpha;
    j["epsilon"] = r.epsilon;
    j["zeta"] = r.zeta;
    j["q"] = r.q;
    j["empirical_success"] = r.empirical_success;
    j["bound_probability"] = r.bound_probability;
    j["error_threshold"] = r.error_threshold;
    j["seed"] = r.seed;
    j["resampled_rows"] = r.resampled_rows;
    return j;
}

MissingSpec missing_spec_from_json(const nlohmann::json &doc) {
    if (!doc.is_object() || !doc.contains("d") || !doc.contains("c"))
        fail(errc::parse_error, "missing spec needs {\"d\":[...], \"c\":[...]}");
    const auto &d = doc["d"];
    const Eigen::Index n = static_cast<Eigen::Index>(d.size());
    MissingSpec spec;
    spec.d = Vec::Zero(n);
    spec.c = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        spec.d(i) = d[static_cast<size_t>(i)].get<double>();
    for (const auto &e : doc["c"]) {
        if (!e.contains("i") || !e.contains("j") || !e.contains("v"))
            fail(errc::parse_error, "missing spec entry needs i, j, v");
        const auto i = e["i"].get<long>();
        const auto j = e["j"].get<long>();
        if (i < 0 || i >= n || j < 0 || j >= n)
            fail(errc::parse_error, "missing spec index out of range");
        spec.c(i, j) = e["v"].get<double>();
    }
    spec.check();
    return spec;
}

nlohmann::json to_json(const MissingSpec &spec) {
    nlohmann::json j;
    j["d"] = std::vector<double>(spec.d.data(), spec.d.data() + spec.d.size());
    auto entries = nlohmann::json::array();
    for (Eigen::Index i = 0; i < spec.c.rows(); ++i)
        for (Eigen::Index jj = 0; jj < spec.c.cols(); ++jj)
            if (spec.c(i, jj) != 0.0)
                entries.push_back({{"i", i}, {"j", jj}, {"v", spec.c(i, jj)}});
    j["c"] = std::move(entries);
    return j;
}

std::vector<std::vector<int>> blocks_from_json(const nlohmann::json &doc) {
    if (!doc.is_object() || !doc.contains("blocks") || !doc["blocks"].is_array())
        fail(errc::parse_error, "partition needs {\"blocks\":[[...],...]}");
    std::vector<std::vector<int>> blocks;
    for (const auto &b : doc["blocks"]) {
        std::vector<int> blk;
        for (const auto &i : b)
            blk.push_back(i.get<int>());
        blocks.push_back(std::move(blk));
    }
    return blocks;
}

FlowMatrix flow_matrix_from_json(const nlohmann::json &doc) {
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("y"))
        fail(errc::parse_error, "flow matrix needs {\"n\":int, \"y\":[[...],...]}");
    const auto n = doc["n"].get<long>();
    if (n <= 0 || static_cast<long>(doc["y"].size()) != n)
        fail(errc::parse_error, "flow matrix row count does not match n");
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> y(n, n);
    for (long i = 0; i < n; ++i) {
        const auto &row = doc["y"][static_cast<size_t>(i)];
        if (static_cast<long>(row.size()) != n)
            fail(errc::parse_error, "flow matrix row " + std::to_string(i) + " has wrong size");
        for (long j = 0; j < n; ++j)
            y(i, j) = row[static_cast<size_t>(j)].get<std::int64_t>();
    }
    return FlowMatrix::from_integer_flows(y);
}

nlohmann::json load_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        fail(errc::io_error, "cannot open '" + path + "'");
    try {
        nlohmann::json doc;
        in >> doc;
        return doc;
    } catch (const nlohmann::json::exception &e) {
        fail(errc::parse_error, path + ": " + e.what());
    }
}

void write_text_file(const std::string &path, const std::string &text) {
    std::ofstream out(path);
    if (!out)
        fail(errc::io_error, "cannot open '" + path + "' for writing");
    out << text;
    if (!out)
        fail(errc::io_error, "write to '" + path + "' failed");
}

} // namespace ionet
