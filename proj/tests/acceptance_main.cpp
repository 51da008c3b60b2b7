// Runs the full verification suite and prints one pass/fail line per
// criterion. Exit status is nonzero when any criterion fails.
#include <cstdint>
#include <iostream>
#include <string>

#include <ionet/verify.hpp>

int main(int argc, char **argv) {
    std::uint64_t seed = 20240701;
    if (argc > 1)
        seed = std::stoull(argv[1]);
    const auto results = ionet::run_acceptance(seed);
    std::cout << ionet::acceptance_table(results);
    for (const auto &r : results)
        if (!r.pass)
            return 1;
    return 0;
}
