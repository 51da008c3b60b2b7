#ifndef IONET_VERIFY_HPP_
#define IONET_VERIFY_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace ionet {

struct CriterionResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Runs the full verification suite: closed-form oracles, randomized bound
// certificates, Monte Carlo concentration checks, chain/locality certificates,
// and a byte-determinism check of the suite itself. Deterministic given seed.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed);

// One JSON line per criterion; identical bytes for identical results.
std::string acceptance_report(const std::vector<CriterionResult> &results);

// Human-readable pass table (one line per criterion plus a summary).
std::string acceptance_table(const std::vector<CriterionResult> &results);

} // namespace ionet

#endif // IONET_VERIFY_HPP_
