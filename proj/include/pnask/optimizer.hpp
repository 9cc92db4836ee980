#pragma once

#include <map>
#include <vector>

#include "pnask/analytic.hpp"
#include "pnask/channel.hpp"

namespace pnask {

/// Candidate grids for the rate maximization. Amplitude steps are expressed
/// as fractions of the feasible range: d = fraction / (m_c - 1), which keeps
/// every candidate strictly inside the d < 1/(m_c - 1) constraint.
struct SearchSpace {
    std::vector<int> primary_orders{2, 4, 8, 16};
    std::vector<int> covert_orders{2, 4, 8};
    std::vector<double> d_fractions{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
};

/// Effective bit rate model used to score a candidate: each stream
/// contributes log2(order) bits per symbol minus a penalty proportional to
/// its symbol error probability. Orders without a table entry are charged
/// log2(order), i.e. a symbol error costs the whole symbol.
struct RateModel {
    std::map<int, double> primary_penalty{{2, 1.0}, {4, 0.80}, {8, 2.35}, {16, 8.0}};
    std::map<int, double> covert_penalty{{2, 1.0}, {4, 0.92}, {8, 1.94}};

    double effective_bits_primary(int m, double ser) const;
    double effective_bits_covert(int m_c, double ser) const;
};

struct GridPoint {
    int m = 0;
    int m_c = 0;
    double d = 0.0;
    double objective = 0.0;
    double r_p = 0.0;
    double r_c = 0.0;
};

struct OptimizationResult {
    int m = 0;
    int m_c = 0;
    double d = 0.0;
    double objective = 0.0;
    double beta = 0.0;
    double es_n0_db = 0.0;
    double r_p = 0.0;
    double r_c = 0.0;
};

/// Exhaustive grid argmax of the weighted effective bit rate
///   [beta * B_p(m, ser_p) + (1 - beta) * B_c(m_c, ser_c)] / t_s
/// with B_p, B_c from the rate model and the analytic symbol error
/// probabilities for the channel. Ties break toward smaller m_c, then
/// smaller d, then smaller m. When grid_out is non-null it receives every
/// evaluated point in iteration order.
OptimizationResult optimize(double es_n0_db, double beta, const SearchSpace& space,
                            const ChannelModel& model, double t_s = 4e-6,
                            const RateModel& rates = {},
                            std::vector<GridPoint>* grid_out = nullptr);

}  // namespace pnask
