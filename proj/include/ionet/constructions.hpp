#ifndef IONET_CONSTRUCTIONS_HPP_
#define IONET_CONSTRUCTIONS_HPP_

#include <functional>
#include <map>
#include <string>
#include <utility>

#include <ionet/matrix.hpp>

namespace ionet {

// A generator output: the network, its parameters, and (when one exists) the
// closed-form influence coefficients as a function of alpha. closed_form_tol
// is the guaranteed max-abs agreement with the direct solver; exact families
// use 1e-10, limit families (finite b standing in for b -> 0) are looser.
struct NamedConstruction {
    std::string name;
    IoMatrix w;
    std::function<Vec(double alpha)> closed_form; // empty when no closed form
    std::map<std::string, double> params;
    double closed_form_tol = 1e-10;
};

// Six-firm network with two mutually-linked hubs supplying four periphery
// firms; coefficients (1/2 - a/3, 1/2 - a/3, a/6, a/6, a/6, a/6).
NamedConstruction figure1();

// Worst-case pair for the missing-share lower bound: rows 1 and 2 uniform,
// every other firm buys 1-delta from firm 1 and delta from firm 2. U is the
// delta = 0 version. Coefficients x_n(delta), y_n(delta), z_n attached.
std::pair<NamedConstruction, NamedConstruction> lower_bound_pair(long n, double delta);

// Hub-and-spoke network attaining the maximum possible coefficient
// (1 - (n-1) a / n) / (2 - a).
NamedConstruction star(long n);

// Two-hub variant attaining both the maximum and the minimum (a/n)
// coefficient simultaneously.
NamedConstruction two_hub(long n);

// Pair demonstrating that a delta share of *firms* with missing data moves
// the top coefficient from firm 1 to firm 2: G is the epsilon-weighted
// two-uniform-rows network, H the observed network with firm 1's supply to
// the periphery missing.
std::pair<NamedConstruction, NamedConstruction> firm_share_pair(long n, double epsilon);

// Chain with feedback b: firm i buys 1-b from firm i-1 and spreads b over the
// rest; firm 1 buys uniformly. Closed form is the b -> 0 limit of the
// resulting linear recurrence.
NamedConstruction locality_chain(long n, double b);

// The k-neighborhood truncation of locality_chain around the last firm,
// rows renormalized. (k+1) x (k+1); closed form is the n -> k+1 limit vector.
NamedConstruction locality_truncated(long n, long k, double b);

// Pads a truncated-network vector with n-k-1 leading zeros for comparison
// against the full network's coefficients.
Vec pad_truncated(const Vec &v_truncated, long n);

// Closed-form helpers shared with tests.
double star_max_coefficient(long n, double alpha);
double lower_bound_x(long n, double delta, double alpha);
double lower_bound_y(long n, double delta, double alpha);
double lower_bound_z(long n, double alpha);
// (1-a) d (n-2)(n-1) / (n (2n-3-a(n-2))): the per-coordinate shift between the
// pair's influence vectors; the 1-norm gap is twice this.
double lower_bound_gap(long n, double delta, double alpha);
// b -> 0 limit coefficients of locality_chain(n, b).
Vec locality_closed_form(long n, double alpha);

} // namespace ionet

#endif // IONET_CONSTRUCTIONS_HPP_
