#include <ionet/verify.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <ionet/constructions.hpp>
#include <ionet/matrix_io.hpp>
#include <ionet/random_instances.hpp>
#include <ionet/serialize.hpp>

namespace ionet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double x) { return format_double(x); }

CriterionResult figure1_closed_form() {
    const NamedConstruction c = figure1();
    double max_dev = 0.0;
    for (double a : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        const Vec v = influence_direct(c.w, LaborShare(a)).v;
        max_dev = std::max(max_dev, (v - c.closed_form(a)).cwiseAbs().maxCoeff());
    }
    return {"figure1-closed-form", max_dev <= 1e-10, "max_dev=" + fmt(max_dev) + " tol=1e-10"};
}

CriterionResult lower_bound_closed_forms() {
    double max_dev = 0.0;
    for (long n : {4L, 10L, 50L})
        for (double d : {0.01, 0.1, 0.3})
            for (double a : {0.1, 0.5, 0.9}) {
                const auto [wc, uc] = lower_bound_pair(n, d);
                const Vec vw = influence_direct(wc.w, LaborShare(a)).v;
                const Vec vu = influence_direct(uc.w, LaborShare(a)).v;
                max_dev = std::max(max_dev, (vw - wc.closed_form(a)).cwiseAbs().maxCoeff());
                max_dev = std::max(max_dev, (vu - uc.closed_form(a)).cwiseAbs().maxCoeff());
                const double gap = lower_bound_gap(n, d, a);
                max_dev = std::max(max_dev, std::abs((vw(0) - vu(0)) + gap));
                max_dev = std::max(max_dev, std::abs((vw(1) - vu(1)) - gap));
            }
    return {"lower-bound-closed-forms", max_dev <= 1e-10,
            "max_dev=" + fmt(max_dev) + " tol=1e-10"};
}

CriterionResult missing_share_certificates(std::uint64_t seed) {
    Rng rng(seed);
    long failures = 0;
    double worst_margin = kInf; // min over instances of bound - measured
    for (int t = 0; t < 1000; ++t) {
        const long n = rng.uniform_int(3, 20);
        const double a = rng.uniform(0.1, 0.9);
        const double delta_target = rng.uniform(0.0, 0.5);
        const IoMatrix w = random_io_matrix(rng, n);
        const MissingSpec spec = random_missing_spec(rng, w, delta_target);
        const IoMatrix u = observe(w, spec);
        const double delta = spec.d.maxCoeff();
        const LaborShare alpha(a);

        const double b_inf = mat_inf_norm(w.entries() - u.entries());
        const double b_bound = (2.0 * delta - delta * delta) / (1.0 - delta);
        const double measured =
            vec_p_norm(influence_direct(u, alpha).v - influence_direct(w, alpha).v, 1.0);
        const double bound = delta_share_bound(alpha, delta);
        if (b_inf > b_bound + 1e-12 || measured > bound + 1e-12)
            ++failures;
        worst_margin = std::min(worst_margin, bound - measured);
    }
    return {"missing-share-certificates", failures == 0,
            "instances=1000 failures=" + std::to_string(failures) +
                " min_margin=" + fmt(worst_margin)};
}

CriterionResult delta_linearity() {
    const long n = 50;
    const LaborShare alpha(0.5);
    const double lower = 2.0 * (1.0 - alpha.value()) / (2.0 - alpha.value()) * 0.9;
    double ratio0 = 0.0, max_rel_dev = 0.0;
    bool in_bracket = true;
    for (int i = 1; i <= 20; ++i) {
        const double d = 0.01 * i;
        const auto [wc, uc] = lower_bound_pair(n, d);
        const double measured = vec_p_norm(influence_direct(wc.w, alpha).v -
                                               influence_direct(uc.w, alpha).v,
                                           1.0);
        const double ratio = measured / d;
        if (i == 1)
            ratio0 = ratio;
        max_rel_dev = std::max(max_rel_dev, std::abs(ratio - ratio0) / ratio0);
        if (ratio < lower || ratio > delta_share_bound(alpha, d) / d)
            in_bracket = false;
    }
    return {"delta-linearity", max_rel_dev <= 0.01 && in_bracket,
            "ratio=" + fmt(ratio0) + " max_rel_dev=" + fmt(max_rel_dev) +
                " bracket=" + (in_bracket ? "yes" : "no")};
}

CriterionResult extremal_coefficients(std::uint64_t seed) {
    double attain_dev = 0.0;
    for (long n = 3; n <= 12; ++n)
        for (double a : {0.1, 0.5, 0.9}) {
            const NamedConstruction c = two_hub(n);
            const Vec v = influence_direct(c.w, LaborShare(a)).v;
            attain_dev = std::max(attain_dev, std::abs(v(0) - star_max_coefficient(n, a)));
            attain_dev =
                std::max(attain_dev, std::abs(v(n - 1) - a / static_cast<double>(n)));
        }
    Rng rng(seed);
    double violation = 0.0;
    for (int t = 0; t < 500; ++t) {
        const long n = rng.uniform_int(3, 12);
        const IoMatrix w = random_io_matrix(rng, n);
        for (double a : {0.1, 0.5, 0.9}) {
            const Vec v = influence_direct(w, LaborShare(a)).v;
            const double lo = a / static_cast<double>(n);
            const double hi = star_max_coefficient(n, a);
            violation = std::max(violation, lo - v.minCoeff());
            violation = std::max(violation, v.maxCoeff() - hi);
        }
    }
    const bool pass = attain_dev <= 1e-12 && violation <= 1e-9;
    return {"extremal-coefficients", pass,
            "attain_dev=" + fmt(attain_dev) + " tol=1e-12 random_violation=" + fmt(violation) +
                " tol=1e-9"};
}

CriterionResult firm_share_negative() {
    const long n = 200;
    const double eps = 1e-6;
    bool pass = true;
    std::ostringstream detail;
    for (double a : {0.25, 0.5}) {
        const auto [g, h] = firm_share_pair(n, eps);
        const LaborShare alpha(a);
        const double l1 = vec_p_norm(influence_direct(g.w, alpha).v -
                                         influence_direct(h.w, alpha).v,
                                     1.0);
        const double need = 2.0 * (1.0 - a) / (2.0 - a) - 0.05;
        if (l1 < need)
            pass = false;
        detail << (a == 0.25 ? "" : " ") << "alpha=" << fmt(a) << ":l1=" << fmt(l1)
               << ">=" << fmt(need);
    }
    return {"firm-share-negative", pass, detail.str()};
}

CriterionResult binomial_monte_carlo(std::uint64_t seed) {
    const long n = 10;
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> y(n, n);
    y.setConstant(1000);
    y.diagonal().setZero();
    const FlowMatrix flows = FlowMatrix::from_integer_flows(y);
    const LaborShare alpha(0.5);
    const long trials = 10000;
    const double margin = 3.0 * std::sqrt(0.0012 / static_cast<double>(trials));
    bool pass = true;
    std::ostringstream detail;
    int idx = 0;
    for (double q : {1.0, 2.0, kInf}) {
        const TrialReport rep =
            monte_carlo(flows, alpha, 0.1, 0.2, q, trials, mix_key(seed, 7, idx));
        const double need = rep.bound_probability - margin;
        if (rep.empirical_success < need)
            pass = false;
        detail << (idx ? " " : "") << "q=" << (std::isinf(q) ? "inf" : fmt(q))
               << ":success=" << fmt(rep.empirical_success) << ">=" << fmt(need);
        ++idx;
    }
    return {"binomial-monte-carlo", pass, detail.str()};
}

CriterionResult chain_block_formulas(std::uint64_t seed) {
    Rng rng(seed);
    double s_dev = 0.0;
    for (int t = 0; t < 100; ++t) {
        const long m1 = rng.uniform_int(2, 6), m2 = rng.uniform_int(2, 6);
        const LaborShare alpha(rng.uniform(0.2, 0.8));
        const auto [w, first_size] = random_bipartition_instance(rng, m1, m2, alpha);
        std::vector<int> first;
        for (long i = 0; i < first_size; ++i)
            first.push_back(static_cast<int>(i));
        const BipartitionDecomposition bip = decompose_bipartition(w, first, alpha);
        const Matrix diff = interaction_matrix(bip) - interaction_matrix_direct(bip);
        s_dev = std::max(s_dev, diff.cwiseAbs().maxCoeff());
    }

    double chain_dev = 0.0;
    for (int t = 0; t < 100; ++t) {
        const long m = rng.uniform_int(2, 8);
        const LaborShare alpha(rng.uniform(0.4, 0.8));
        const auto sizes = chain_sizes(rng, alpha.value(), m, 6);
        const auto [w, part] = random_weakly_coupled_chain(rng, sizes, alpha);
        const Vec via_chain = chain_influence(w, part, alpha).v;
        const Vec direct = influence_direct(w, alpha).v;
        chain_dev = std::max(chain_dev, (via_chain - direct).cwiseAbs().maxCoeff());
    }

    long cert_failures = 0;
    int done = 0;
    double min_margin = kInf;
    while (done < 200) {
        const long m = rng.uniform_int(3, 8);
        const LaborShare alpha(rng.uniform(0.4, 0.75));
        const auto sizes = chain_sizes(rng, alpha.value(), m, 5);
        const auto [w, part] = random_weakly_coupled_chain(rng, sizes, alpha);
        const long k_cut = rng.uniform_int(2, m - 1);
        const IoMatrix u = perturb_chain_tail(rng, w, part, k_cut);
        const double gamma = std::max(decompose(w, part, alpha).gamma,
                                      decompose(u, part, alpha).gamma);
        if (gamma >= 0.999)
            continue; // the bound needs a weakly coupled pair; redraw
        const long q = rng.uniform_int(1, k_cut);
        const double bound = truncation_bound(part, gamma, q, k_cut);
        const double measured = projected_error(influence_direct(w, alpha).v,
                                                influence_direct(u, alpha).v, part, q);
        if (measured > bound + 1e-12)
            ++cert_failures;
        min_margin = std::min(min_margin, bound - measured);
        ++done;
    }

    const bool pass = s_dev <= 1e-10 && chain_dev <= 1e-10 && cert_failures == 0;
    return {"chain-block-formulas", pass,
            "s_dev=" + fmt(s_dev) + " chain_dev=" + fmt(chain_dev) +
                " tol=1e-10 cert_failures=" + std::to_string(cert_failures) +
                "/200 min_margin=" + fmt(min_margin)};
}

// A directed chain whose head is a closed pair and whose remaining blocks are
// singletons; `spread` is the weight the first singleton puts on the first
// head firm.
std::pair<IoMatrix, ChainPartition> singleton_chain(long blocks, double spread) {
    const long n = blocks + 1;
    Matrix m = Matrix::Zero(n, n);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    m(2, 0) = spread;
    m(2, 1) = 1.0 - spread;
    for (long i = 3; i < n; ++i)
        m(i, i - 1) = 1.0;
    IoMatrix w = IoMatrix::validate(m, ValidationMode::strict);
    std::vector<std::vector<int>> blks{{0, 1}};
    for (long i = 2; i < n; ++i)
        blks.push_back({static_cast<int>(i)});
    ChainPartition part = ChainPartition::validate(w, blks);
    return {std::move(w), std::move(part)};
}

// Missing-data spec confined to the rows of firms in blocks 1..k+1.
MissingSpec neighborhood_spec(Rng &rng, const IoMatrix &w, const ChainPartition &part,
                              double delta_k, long k) {
    MissingSpec spec = random_missing_spec(rng, w, delta_k);
    std::vector<bool> early(static_cast<size_t>(w.size()), false);
    for (long r = 0; r < std::min(k + 1, part.block_count()); ++r)
        for (int i : part.blocks()[static_cast<size_t>(r)])
            early[static_cast<size_t>(i)] = true;
    for (Eigen::Index i = 0; i < w.size(); ++i)
        if (!early[static_cast<size_t>(i)]) {
            spec.d(i) = 0.0;
            spec.c.row(i).setZero();
        }
    return spec;
}

CriterionResult chain_neighborhood_certificate(std::uint64_t seed) {
    Rng rng(seed);
    long failures = 0, instances = 0;
    double min_margin = kInf;
    for (double delta_k : {0.0, 0.05, 0.1})
        for (long k : {3L, 10L}) {
            const LaborShare alpha(0.5);
            // literal singleton chains of 30 blocks
            for (int t = 0; t < 25; ++t) {
                const auto [w, part] = singleton_chain(30, rng.uniform(0.1, 0.9));
                const IoMatrix u = observe(w, neighborhood_spec(rng, w, part, delta_k, k));
                const double gamma = std::max(decompose(w, part, alpha).gamma,
                                              decompose(u, part, alpha).gamma);
                const double bound = combined_bound(alpha, gamma, delta_k, k);
                const Vec vw = influence_direct(w, alpha).v;
                const Vec vu = influence_direct(u, alpha).v;
                for (int i : part.blocks()[0])
                    if (std::abs(vw(i) - vu(i)) > bound + 1e-12)
                        ++failures;
                min_margin = std::min(
                    min_margin, bound - std::abs(vw(0) - vu(0)));
                ++instances;
            }
            // pair-block chains of 30 blocks: the far tail genuinely varies
            for (int t = 0; t < 25; ++t) {
                const std::vector<long> sizes(30, 2);
                const auto [w, part] = random_weakly_coupled_chain(rng, sizes, alpha);
                IoMatrix u = perturb_chain_tail(rng, w, part, k + 2);
                u = observe(u, neighborhood_spec(rng, u, part, delta_k, k));
                const double gamma = std::max(decompose(w, part, alpha).gamma,
                                              decompose(u, part, alpha).gamma);
                if (gamma >= 0.999)
                    continue; // bound needs weak coupling on both sides; redraw
                const double bound = combined_bound(alpha, gamma, delta_k, k);
                const Vec vw = influence_direct(w, alpha).v;
                const Vec vu = influence_direct(u, alpha).v;
                for (int i : part.blocks()[0]) {
                    if (std::abs(vw(i) - vu(i)) > bound + 1e-12)
                        ++failures;
                    min_margin = std::min(min_margin, bound - std::abs(vw(i) - vu(i)));
                }
                ++instances;
            }
        }
    return {"chain-neighborhood-certificate", failures == 0,
            "instances=" + std::to_string(instances) +
                " failures=" + std::to_string(failures) + " min_margin=" + fmt(min_margin)};
}

CriterionResult locality_counterexample() {
    const long n = 100, k = 10;
    const double a = 0.5, b = 1e-8;
    const LaborShare alpha(a);
    const NamedConstruction g = locality_chain(n, b);
    const NamedConstruction h = locality_truncated(n, k, b);
    const Vec vg = influence_direct(g.w, alpha).v;
    const Vec vh = influence_direct(h.w, alpha).v;
    const double l1 = vec_p_norm(vg - pad_truncated(vh, n), 1.0);
    const double rhs = static_cast<double>(n - k - 1) * a / static_cast<double>(n) +
                       static_cast<double>(k + 1) *
                           (a / static_cast<double>(k + 1) -
                            1.0 / (a * static_cast<double>(n)));
    const Vec p = g.closed_form(a);
    const double closed_dev = (vg - p).cwiseAbs().maxCoeff();
    const double trunc_dev = (vh - h.closed_form(a)).cwiseAbs().maxCoeff();
    bool in_range = true;
    for (Eigen::Index t = 0; t < n; ++t)
        if (p(t) < a / static_cast<double>(n) - 1e-12 ||
            p(t) > 1.0 / (a * static_cast<double>(n)) + 1e-12)
            in_range = false;
    const bool pass = l1 >= 0.9 * rhs && closed_dev <= 1e-5 && trunc_dev <= 1e-5 && in_range;
    return {"locality-counterexample", pass,
            "l1=" + fmt(l1) + ">=" + fmt(0.9 * rhs) + " closed_dev=" + fmt(closed_dev) +
                " trunc_dev=" + fmt(trunc_dev) + " tol=1e-5 p_range=" +
                (in_range ? "yes" : "no")};
}

std::vector<CriterionResult> run_criteria(std::uint64_t seed) {
    std::vector<CriterionResult> out;
    out.push_back(figure1_closed_form());
    out.push_back(lower_bound_closed_forms());
    out.push_back(missing_share_certificates(mix_key(seed, 3)));
    out.push_back(delta_linearity());
    out.push_back(extremal_coefficients(mix_key(seed, 5)));
    out.push_back(firm_share_negative());
    out.push_back(binomial_monte_carlo(mix_key(seed, 7)));
    out.push_back(chain_block_formulas(mix_key(seed, 8)));
    out.push_back(chain_neighborhood_certificate(mix_key(seed, 9)));
    out.push_back(locality_counterexample());
    return out;
}

} // namespace

std::string acceptance_report(const std::vector<CriterionResult> &results) {
    std::ostringstream os;
    for (const auto &r : results) {
        nlohmann::json j;
        j["criterion"] = r.name;
        j["pass"] = r.pass;
        j["detail"] = r.detail;
        os << j.dump() << '\n';
    }
    return os.str();
}

std::vector<CriterionResult> run_acceptance(std::uint64_t seed) {
    std::vector<CriterionResult> results = run_criteria(seed);
    const std::string first = acceptance_report(results);
    const std::string second = acceptance_report(run_criteria(seed));
    results.push_back({"deterministic-reports", first == second,
                       first == second ? "two runs byte-identical"
                                       : "reports differ between runs"});
    return results;
}

std::string acceptance_table(const std::vector<CriterionResult> &results) {
    std::ostringstream os;
    size_t width = 0;
    for (const auto &r : results)
        width = std::max(width, r.name.size());
    long passed = 0;
    for (const auto &r : results) {
        os << (r.pass ? "PASS" : "FAIL") << "  " << r.name
           << std::string(width - r.name.size() + 2, ' ') << r.detail << '\n';
        if (r.pass)
            ++passed;
    }
    os << passed << "/" << results.size() << " criteria passed\n";
    return os.str();
}

} // namespace ionet
