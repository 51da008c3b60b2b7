#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <ionet/constructions.hpp>
#include <ionet/matrix_io.hpp>
#include <ionet/random_instances.hpp>
#include <ionet/serialize.hpp>
#include <ionet/verify.hpp>

namespace {

using namespace ionet;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitCertificate = 4;

int exit_code_for(errc code) {
    switch (code) {
    case errc::no_convergence:
    case errc::singular_system:
    case errc::all_missing_row:
    case errc::coupling_too_strong:
    case errc::not_weakly_coupled:
        return kExitNumeric;
    default:
        return kExitInput;
    }
}

MatrixFormat parse_format(const std::string &name, const std::string &path) {
    if (name == "dense-csv")
        return MatrixFormat::dense_csv;
    if (name == "edge-json")
        return MatrixFormat::edge_json;
    if (name == "auto")
        return format_from_path(path);
    fail(errc::invalid_argument, "unknown format '" + name + "'");
}

double parse_q(const std::string &q) {
    if (q == "inf")
        return std::numeric_limits<double>::infinity();
    try {
        const double v = std::stod(q);
        if (v >= 1.0)
            return v;
    } catch (const std::exception &) {
    }
    fail(errc::invalid_p, "q must be a real >= 1 or 'inf'");
}

void emit(const std::string &text, const std::string &out_path) {
    if (out_path.empty())
        std::cout << text;
    else
        write_text_file(out_path, text);
}

struct GlobalOpts {
    bool strict = false;
};

void add_influence(CLI::App &app, GlobalOpts &g) {
    auto *cmd = app.add_subcommand("influence", "compute the influence vector of a matrix");
    auto matrix = std::make_shared<std::string>();
    auto format = std::make_shared<std::string>("auto");
    auto alpha = std::make_shared<double>(0.5);
    auto method = std::make_shared<std::string>("direct");
    auto tol = std::make_shared<double>(1e-12);
    auto cap = std::make_shared<long>(0);
    auto out = std::make_shared<std::string>();
    cmd->add_option("--matrix", *matrix, "matrix file")->required();
    cmd->add_option("--format", *format, "dense-csv | edge-json | auto");
    cmd->add_option("--alpha", *alpha, "labor share in (0,1)")->required();
    cmd->add_option("--method", *method, "direct | power");
    cmd->add_option("--tol", *tol, "power-iteration stopping tolerance");
    cmd->add_option("--cap", *cap, "power-iteration cap (0 = automatic)");
    cmd->add_option("--out", *out, "write the result here instead of stdout");
    (void)g;
    cmd->callback([=]() {
        const IoMatrix w = load_matrix(*matrix, parse_format(*format, *matrix));
        const LaborShare a(*alpha);
        InfluenceResult res;
        if (*method == "direct")
            res = influence_direct(w, a);
        else if (*method == "power")
            res = influence_power(w, a, *tol, *cap > 0 ? *cap : power_iteration_cap(a, *tol));
        else
            fail(errc::invalid_argument, "unknown method '" + *method + "'");
        emit(to_json(res).dump() + "\n", *out);
    });
}

void add_certify(CLI::App &app, GlobalOpts &g) {
    auto *cmd = app.add_subcommand("certify", "error-bound certificates for a matrix pair");
    auto true_path = std::make_shared<std::string>();
    auto observed_path = std::make_shared<std::string>();
    auto alpha = std::make_shared<double>(0.5);
    auto delta = std::make_shared<double>(-1.0);
    auto out = std::make_shared<std::string>();
    cmd->add_option("--true", *true_path, "true matrix file")->required();
    cmd->add_option("--observed", *observed_path, "observed matrix file")->required();
    cmd->add_option("--alpha", *alpha, "labor share in (0,1)")->required();
    cmd->add_option("--delta", *delta, "missing-share bound input (omit to skip)");
    cmd->add_option("--out", *out, "write certificates here instead of stdout");
    cmd->callback([=, &g]() {
        const IoMatrix w = load_matrix(*true_path, format_from_path(*true_path));
        const IoMatrix u = load_matrix(*observed_path, format_from_path(*observed_path));
        std::optional<double> d;
        if (*delta >= 0.0)
            d = *delta;
        const auto certs = certify(w, u, LaborShare(*alpha), d);
        std::ostringstream os;
        bool all_hold = true;
        for (const auto &c : certs) {
            os << to_json(c).dump() << '\n';
            all_hold = all_hold && c.holds;
        }
        emit(os.str(), *out);
        if (g.strict && !all_hold)
            std::exit(kExitCertificate);
    });
}

void add_observe(CLI::App &app) {
    auto *cmd = app.add_subcommand("observe", "materialize an observed matrix from a spec");
    auto matrix = std::make_shared<std::string>();
    auto spec_path = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--matrix", *matrix, "true matrix file")->required();
    cmd->add_option("--spec", *spec_path, "missing-data spec JSON")->required();
    cmd->add_option("--out", *out, "output matrix file (.csv or .json)")->required();
    cmd->callback([=]() {
        const IoMatrix w = load_matrix(*matrix, format_from_path(*matrix));
        const MissingSpec spec = missing_spec_from_json(load_json_file(*spec_path));
        save_matrix(observe(w, spec), *out, format_from_path(*out));
    });
}

void add_simulate(CLI::App &app) {
    auto *cmd = app.add_subcommand("simulate", "binomial missing-data Monte Carlo");
    auto flows_path = std::make_shared<std::string>();
    auto alpha = std::make_shared<double>(0.5);
    auto zeta = std::make_shared<double>(0.1);
    auto epsilon = std::make_shared<double>(0.2);
    auto q = std::make_shared<std::string>("1");
    auto trials = std::make_shared<long>(1000);
    auto seed = std::make_shared<std::uint64_t>(1);
    auto out = std::make_shared<std::string>();
    cmd->add_option("--flows", *flows_path, "integer dollar-flow JSON")->required();
    cmd->add_option("--alpha", *alpha, "labor share in (0,1)");
    cmd->add_option("--zeta", *zeta, "per-dollar missing probability")->required();
    cmd->add_option("--epsilon", *epsilon, "relative concentration radius")->required();
    cmd->add_option("--q", *q, "error norm: real >= 1 or 'inf'");
    cmd->add_option("--trials", *trials, "number of Monte Carlo trials");
    cmd->add_option("--seed", *seed, "stream seed");
    cmd->add_option("--out", *out, "write the report here instead of stdout");
    cmd->callback([=]() {
        const FlowMatrix flows = flow_matrix_from_json(load_json_file(*flows_path));
        const TrialReport rep = monte_carlo(flows, LaborShare(*alpha), *zeta, *epsilon,
                                            parse_q(*q), *trials, *seed);
        emit(to_json(rep).dump() + "\n", *out);
    });
}

void add_chain(CLI::App &app) {
    auto *cmd = app.add_subcommand("chain", "directed-chain decomposition report");
    auto matrix = std::make_shared<std::string>();
    auto partition_path = std::make_shared<std::string>();
    auto alpha = std::make_shared<double>(0.5);
    auto out = std::make_shared<std::string>();
    cmd->add_option("--matrix", *matrix, "matrix file")->required();
    cmd->add_option("--partition", *partition_path, "partition JSON {\"blocks\":[[...],...]}")
        ->required();
    cmd->add_option("--alpha", *alpha, "labor share in (0,1)")->required();
    cmd->add_option("--out", *out, "write the report here instead of stdout");
    cmd->callback([=]() {
        const IoMatrix w = load_matrix(*matrix, format_from_path(*matrix));
        const LaborShare a(*alpha);
        const ChainPartition part =
            ChainPartition::validate(w, blocks_from_json(load_json_file(*partition_path)));
        const ChainDecomposition dec = decompose(w, part, a);
        nlohmann::json rep;
        rep["gamma"] = dec.gamma;
        rep["weakly_coupled"] = dec.weakly_coupled;
        rep["interface_norms"] = dec.interface_norms;
        std::vector<long> sizes;
        for (long r = 0; r < part.block_count(); ++r)
            sizes.push_back(part.block_size(r));
        rep["block_sizes"] = sizes;
        if (dec.weakly_coupled) {
            const InfluenceResult via_chain = chain_influence(w, part, a);
            rep["influence"] = to_json(via_chain);
            rep["max_dev_vs_direct"] =
                (via_chain.v - influence_direct(w, a).v).cwiseAbs().maxCoeff();
        } else {
            rep["influence"] = nullptr;
        }
        emit(rep.dump() + "\n", *out);
    });
}

void add_construct(CLI::App &app) {
    auto *cmd = app.add_subcommand("construct", "emit a named network and its closed form");
    auto name = std::make_shared<std::string>();
    auto n = std::make_shared<long>(10);
    auto delta = std::make_shared<double>(0.1);
    auto epsilon = std::make_shared<double>(1e-6);
    auto b = std::make_shared<double>(1e-8);
    auto k = std::make_shared<long>(3);
    auto alpha = std::make_shared<double>(0.5);
    auto prefix = std::make_shared<std::string>();
    cmd->add_option("--name", *name,
                    "figure1 | lower-bound | star | two-hub | firm-share | locality")
        ->required();
    cmd->add_option("--n", *n, "firm count");
    cmd->add_option("--delta", *delta, "missing share (lower-bound family)");
    cmd->add_option("--epsilon", *epsilon, "link weight (firm-share family)");
    cmd->add_option("--b", *b, "feedback weight (locality family)");
    cmd->add_option("--k", *k, "neighborhood radius (locality family)");
    cmd->add_option("--alpha", *alpha, "labor share for the closed-form evaluation");
    cmd->add_option("--out-prefix", *prefix, "output path prefix")->required();
    cmd->callback([=]() {
        std::vector<std::pair<std::string, NamedConstruction>> outputs;
        if (*name == "figure1") {
            outputs.emplace_back(*prefix + ".json", figure1());
        } else if (*name == "lower-bound") {
            auto [wc, uc] = lower_bound_pair(*n, *delta);
            outputs.emplace_back(*prefix + "-w.json", std::move(wc));
            outputs.emplace_back(*prefix + "-u.json", std::move(uc));
        } else if (*name == "star") {
            outputs.emplace_back(*prefix + ".json", star(*n));
        } else if (*name == "two-hub") {
            outputs.emplace_back(*prefix + ".json", two_hub(*n));
        } else if (*name == "firm-share") {
            auto [g, h] = firm_share_pair(*n, *epsilon);
            outputs.emplace_back(*prefix + "-g.json", std::move(g));
            outputs.emplace_back(*prefix + "-h.json", std::move(h));
        } else if (*name == "locality") {
            outputs.emplace_back(*prefix + "-full.json", locality_chain(*n, *b));
            outputs.emplace_back(*prefix + "-truncated.json",
                                 locality_truncated(*n, *k, *b));
        } else {
            fail(errc::invalid_argument, "unknown construction '" + *name + "'");
        }
        nlohmann::json closed = nlohmann::json::array();
        for (const auto &[path, c] : outputs) {
            save_matrix(c.w, path, MatrixFormat::edge_json);
            nlohmann::json entry;
            entry["name"] = c.name;
            entry["file"] = path;
            entry["params"] = c.params;
            entry["alpha"] = *alpha;
            if (c.closed_form) {
                const Vec v = c.closed_form(*alpha);
                entry["closed_form"] = std::vector<double>(v.data(), v.data() + v.size());
                entry["closed_form_tol"] = c.closed_form_tol;
            } else {
                entry["closed_form"] = nullptr;
            }
            closed.push_back(std::move(entry));
        }
        write_text_file(*prefix + "-closed-form.json", closed.dump() + "\n");
    });
}

struct Grid {
    double lo = 0.0, hi = 0.0, step = 0.0;
};

Grid parse_grid(const std::string &text) {
    Grid g;
    char c1 = 0, c2 = 0;
    std::istringstream is(text);
    if (!(is >> g.lo >> c1 >> g.hi >> c2 >> g.step) || c1 != ':' || c2 != ':' ||
        !(g.step > 0.0))
        fail(errc::invalid_argument, "grid must be lo:hi:step with step > 0");
    return g;
}

void add_sweep(CLI::App &app) {
    auto *cmd = app.add_subcommand("sweep", "parameter sweep emitting (value, measured, bound) CSV");
    auto construction = std::make_shared<std::string>();
    auto param = std::make_shared<std::string>();
    auto grid_text = std::make_shared<std::string>();
    auto n = std::make_shared<long>(10);
    auto alpha = std::make_shared<double>(0.5);
    auto delta = std::make_shared<double>(0.1);
    auto b = std::make_shared<double>(1e-8);
    auto out = std::make_shared<std::string>();
    cmd->add_option("--construction", *construction, "lower-bound | firm-share | locality")
        ->required();
    cmd->add_option("--param", *param, "delta | n | epsilon | k")->required();
    cmd->add_option("--grid", *grid_text, "lo:hi:step")->required();
    cmd->add_option("--n", *n, "firm count (fixed when sweeping other parameters)");
    cmd->add_option("--alpha", *alpha, "labor share");
    cmd->add_option("--delta", *delta, "missing share (fixed when sweeping n)");
    cmd->add_option("--b", *b, "feedback weight (locality family)");
    cmd->add_option("--out", *out, "write the CSV here instead of stdout");
    cmd->callback([=]() {
        const Grid grid = parse_grid(*grid_text);
        const LaborShare a(*alpha);
        std::ostringstream os;
        os << *param << ",measured,bound\n";
        for (double v = grid.lo; v <= grid.hi + 1e-12; v += grid.step) {
            double measured = 0.0, bound = 0.0;
            if (*construction == "lower-bound") {
                const long nn = *param == "n" ? static_cast<long>(std::llround(v)) : *n;
                const double d = *param == "delta" ? v : *delta;
                if (*param != "delta" && *param != "n")
                    fail(errc::invalid_argument, "lower-bound sweeps delta or n");
                const auto [wc, uc] = lower_bound_pair(nn, d);
                measured = vec_p_norm(influence_direct(wc.w, a).v -
                                          influence_direct(uc.w, a).v,
                                      1.0);
                bound = delta_share_bound(a, d);
            } else if (*construction == "firm-share") {
                if (*param != "epsilon")
                    fail(errc::invalid_argument, "firm-share sweeps epsilon");
                const auto [g, h] = firm_share_pair(*n, v);
                measured = vec_p_norm(influence_direct(g.w, a).v -
                                          influence_direct(h.w, a).v,
                                      1.0);
                bound = 2.0 * (1.0 - a.value()) / (2.0 - a.value());
            } else if (*construction == "locality") {
                if (*param != "k")
                    fail(errc::invalid_argument, "locality sweeps k");
                const long k = static_cast<long>(std::llround(v));
                const NamedConstruction g = locality_chain(*n, *b);
                const NamedConstruction h = locality_truncated(*n, k, *b);
                measured = vec_p_norm(influence_direct(g.w, a).v -
                                          pad_truncated(influence_direct(h.w, a).v, *n),
                                      1.0);
                const double nn = static_cast<double>(*n), kk = static_cast<double>(k);
                bound = (nn - kk - 1.0) * a.value() / nn +
                        (kk + 1.0) * (a.value() / (kk + 1.0) - 1.0 / (a.value() * nn));
            } else {
                fail(errc::invalid_argument, "unknown construction '" + *construction + "'");
            }
            os << format_double(v) << ',' << format_double(measured) << ','
               << format_double(bound) << '\n';
        }
        emit(os.str(), *out);
    });
}

void add_verify_all(CLI::App &app, GlobalOpts &g) {
    auto *cmd = app.add_subcommand("verify-all", "run the full verification suite");
    auto seed = std::make_shared<std::uint64_t>(20240701);
    auto out = std::make_shared<std::string>();
    cmd->add_option("--seed", *seed, "seed for the randomized criteria");
    cmd->add_option("--out", *out, "also write the JSON-lines report here");
    cmd->callback([=, &g]() {
        const auto results = run_acceptance(*seed);
        std::cout << acceptance_table(results);
        if (!out->empty())
            write_text_file(*out, acceptance_report(results));
        bool all = true;
        for (const auto &r : results)
            all = all && r.pass;
        if (!all && g.strict)
            std::exit(kExitCertificate);
    });
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"influence vectors and missing-data error certificates "
                 "for input-output networks"};
    app.require_subcommand(1);
    GlobalOpts g;
    app.add_flag("--strict", g.strict, "exit 4 when any certificate fails");
    add_influence(app, g);
    add_certify(app, g);
    add_observe(app);
    add_simulate(app);
    add_chain(app);
    add_construct(app);
    add_sweep(app);
    add_verify_all(app, g);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e); // prints help or the usage error
        return code == 0 ? kExitOk : kExitInput;
    } catch (const ionet::Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitOk;
}
