#ifndef IONET_ERRORS_HPP_
#define IONET_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace ionet {

// Error codes used across the library. Tests match on the code, messages are
// for humans.
enum class errc {
    non_square,
    negative_entry,
    nonzero_diagonal,
    zero_row,
    row_sum_violation,
    invalid_p,
    no_convergence,
    parse_error,
    validation_error,
    singular_system,
    self_loop_only,
    spec_mismatch,
    degenerate_row,
    invalid_delta,
    all_missing_row,
    not_a_partition,
    back_edge,
    skip_edge,
    coupling_too_strong,
    not_weakly_coupled,
    invalid_k,
    invalid_indices,
    invalid_argument,
    io_error,
};

const char *errc_name(errc code);

class Error : public std::runtime_error {
  public:
    Error(errc code, const std::string &what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

  private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string &what) { throw Error(code, what); }

} // namespace ionet

#endif // IONET_ERRORS_HPP_
