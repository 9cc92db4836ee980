#pragma once

#include <functional>

#include "pnask/channel.hpp"
#include "pnask/modem.hpp"
#include "pnask/special.hpp"

namespace pnask {

/// Per-subcarrier error-discounted symbol rates.
struct RatePair {
    double r_p = 0.0;
    double r_c = 0.0;
};

/// Closed-form covert-channel SER over AWGN for the given coding map.
/// es_n0 is the linear Es/N0 ratio with Es normalized to 1. Returns 0 when
/// the map has a single level (no covert decision to get wrong).
double covert_ser_awgn(double es_n0, const CovertCodingMap& map);

/// Exact M-PSK SER over AWGN at linear per-symbol SNR gamma. Closed form for
/// m = 2; the single-finite-integral form otherwise, evaluated by adaptive
/// quadrature well below 1e-10 absolute error.
double mpsk_ser_awgn(double gamma, int m);

/// Primary-channel SER over AWGN: M-PSK SER averaged over the covert
/// amplitude levels, each scaling the effective symbol energy.
double primary_ser_awgn(double es_n0, int m, const CovertCodingMap& map);

/// SER under fading: integrates ser_awgn(es_n0 * z) against the density of
/// z = |h|^2 for the model. Adaptive quadrature at 1e-6 relative tolerance
/// with the integration domain truncated where the density tail mass drops
/// below 1e-9. Throws std::runtime_error if the quadrature does not converge
/// and std::invalid_argument for a non-fading model.
double ser_fading(double es_n0, const ChannelModel& model,
                  const std::function<double(double)>& ser_awgn);

/// Covert/primary SER dispatching on the channel kind (AWGN closed form, or
/// the fading integral).
double covert_ser(double es_n0, const CovertCodingMap& map, const ChannelModel& model);
double primary_ser(double es_n0, int m, const CovertCodingMap& map, const ChannelModel& model);

/// Mean transmitted energy per symbol: es scaled by the average squared
/// amplitude level. Always <= es.
double energy_per_symbol(double es, const CovertCodingMap& map);

/// (1 - ser) / t_s, the error-discounted symbol rate.
double rate_from_ser(double ser, double t_s);

/// Primary and covert goodput per subcarrier at symbol period t_s.
RatePair symbol_goodput(double es_n0, int m, const CovertCodingMap& map, double t_s,
                        const ChannelModel& model);

}  // namespace pnask
