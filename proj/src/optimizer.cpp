#include "pnask/optimizer.hpp"

#include <cmath>
#include <stdexcept>

#include "pnask/modem.hpp"

namespace pnask {

namespace {

double penalty_or_log2(const std::map<int, double>& table, int order) {
    const auto it = table.find(order);
    return it != table.end() ? it->second : std::log2(double(order));
}

}  // namespace

double RateModel::effective_bits_primary(int m, double ser) const {
    return std::log2(double(m)) - penalty_or_log2(primary_penalty, m) * ser;
}

double RateModel::effective_bits_covert(int m_c, double ser) const {
    return std::log2(double(m_c)) - penalty_or_log2(covert_penalty, m_c) * ser;
}

OptimizationResult optimize(double es_n0_db, double beta, const SearchSpace& space,
                            const ChannelModel& model, double t_s, const RateModel& rates,
                            std::vector<GridPoint>* grid_out) {
    if (std::isnan(beta) || beta < 0.0 || beta > 1.0) {
        throw std::invalid_argument("optimize: beta must lie in [0, 1]");
    }
    if (space.primary_orders.empty() || space.covert_orders.empty() || space.d_fractions.empty()) {
        throw std::invalid_argument("optimize: search space must be non-empty");
    }
    for (double c : space.d_fractions) {
        if (!(c > 0.0 && c < 1.0)) {
            throw std::invalid_argument(
                "optimize: d fractions must lie in (0, 1) to keep d < 1/(m_c - 1)");
        }
    }
    const double es_n0 = std::pow(10.0, es_n0_db / 10.0);
    if (grid_out) grid_out->clear();

    OptimizationResult best;
    best.beta = beta;
    best.es_n0_db = es_n0_db;
    bool have_best = false;

    // Iteration order = tie-break order (m_c, then d, then m ascending);
    // replacing only on a strictly larger objective keeps the first-seen
    // candidate of any tie.
    for (int m_c : space.covert_orders) {
        for (double fraction : space.d_fractions) {
            // A single covert level has no step; evaluate it once.
            if (m_c == 1 && fraction != space.d_fractions.front()) continue;
            const double d = m_c > 1 ? fraction / (m_c - 1) : 0.0;
            const CovertCodingMap map = build_coding_map(m_c, d);
            const double ser_c = covert_ser(es_n0, map, model);
            const double bits_c = rates.effective_bits_covert(m_c, ser_c);
            for (int m : space.primary_orders) {
                const double ser_p = primary_ser(es_n0, m, map, model);
                const double bits_p = rates.effective_bits_primary(m, ser_p);
                const double objective = (beta * bits_p + (1.0 - beta) * bits_c) / t_s;
                if (grid_out) {
                    grid_out->push_back({m, m_c, d, objective, rate_from_ser(ser_p, t_s),
                                         rate_from_ser(ser_c, t_s)});
                }
                if (!have_best || objective > best.objective) {
                    have_best = true;
                    best.m = m;
                    best.m_c = m_c;
                    best.d = d;
                    best.objective = objective;
                    best.r_p = rate_from_ser(ser_p, t_s);
                    best.r_c = rate_from_ser(ser_c, t_s);
                }
            }
        }
    }
    return best;
}

}  // namespace pnask
