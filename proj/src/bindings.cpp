#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pnask/analytic.hpp"
#include "pnask/channel.hpp"
#include "pnask/modem.hpp"
#include "pnask/montecarlo.hpp"
#include "pnask/ofdm.hpp"
#include "pnask/optimizer.hpp"
#include "pnask/special.hpp"
#include "pnask/version.hpp"

namespace py = pybind11;

namespace {

std::vector<std::uint8_t> as_byte_vector(const py::bytes& data) {
    const std::string raw = data;
    return {raw.begin(), raw.end()};
}

py::bytes as_py_bytes(const std::vector<std::uint8_t>& data) {
    return py::bytes(reinterpret_cast<const char*>(data.data()), data.size());
}

}  // namespace

PYBIND11_MODULE(_pnask, m) {
    using namespace pnask;

    m.doc() = "PN-ASK covert modulation core";
    m.attr("__version__") = PNASK_VERSION;

    // modem ------------------------------------------------------------
    py::class_<CovertCodingMap>(m, "CovertCodingMap")
        .def_readonly("covert_order", &CovertCodingMap::covert_order)
        .def_readonly("amplitude_step", &CovertCodingMap::amplitude_step)
        .def_readonly("levels", &CovertCodingMap::levels)
        .def_readonly("thresholds", &CovertCodingMap::thresholds)
        .def("level", &CovertCodingMap::level, py::arg("covert_index"));

    py::class_<SymbolPair>(m, "SymbolPair")
        .def(py::init([](int primary, int covert) {
                 SymbolPair pair;
                 pair.primary_index = primary;
                 pair.covert_index = covert;
                 return pair;
             }),
             py::arg("primary_index") = 0, py::arg("covert_index") = 0)
        .def_readwrite("primary_index", &SymbolPair::primary_index)
        .def_readwrite("covert_index", &SymbolPair::covert_index)
        .def("__eq__", [](const SymbolPair& a, const SymbolPair& b) { return a == b; })
        .def("__repr__", [](const SymbolPair& p) {
            return "SymbolPair(primary_index=" + std::to_string(p.primary_index) +
                   ", covert_index=" + std::to_string(p.covert_index) + ")";
        });

    m.def("build_coding_map", &build_coding_map, py::arg("covert_order"),
          py::arg("amplitude_step") = 0.0);
    m.def("psk_phase_offset", &psk_phase_offset, py::arg("order"));
    m.def("psk_modulate", &psk_modulate, py::arg("symbol_index"), py::arg("order"));
    m.def("pnask_modulate", &pnask_modulate, py::arg("pair"), py::arg("order"), py::arg("map"));
    m.def("pnask_demodulate", &pnask_demodulate, py::arg("received"), py::arg("order"),
          py::arg("map"));
    m.def("quantize_covert_level", &quantize_covert_level, py::arg("magnitude"), py::arg("map"));
    m.def("covert_bits_for_index", &covert_bits_for_index, py::arg("covert_index"),
          py::arg("covert_order"));
    m.def("covert_index_for_bits", &covert_index_for_bits, py::arg("bits"),
          py::arg("covert_order"));
    m.def(
        "apply_displacement",
        [](Sample sample, int covert_index, const CovertCodingMap& map, std::uint64_t seed,
           std::uint64_t stream) {
            Rng rng = make_stream_rng(seed, stream);
            return apply_displacement(sample, covert_index, map, rng);
        },
        py::arg("sample"), py::arg("covert_index"), py::arg("map"), py::arg("seed"),
        py::arg("stream") = 0,
        "Displaces one sample using the stream derived from (seed, stream).");

    // channel ------------------------------------------------------------
    py::enum_<ChannelKind>(m, "ChannelKind")
        .value("Awgn", ChannelKind::Awgn)
        .value("Rayleigh", ChannelKind::Rayleigh)
        .value("Rician", ChannelKind::Rician)
        .value("LogNormal", ChannelKind::LogNormal);

    py::class_<ChannelModel>(m, "ChannelModel")
        .def_static("awgn", &ChannelModel::awgn)
        .def_static("rayleigh", &ChannelModel::rayleigh, py::arg("sigma_h") = 1.0)
        .def_static("rician", &ChannelModel::rician, py::arg("k_factor"), py::arg("sigma_h") = 1.0)
        .def_static("lognormal", &ChannelModel::lognormal, py::arg("ln_mu") = 0.0,
                    py::arg("ln_sigma") = 0.5)
        .def_readonly("kind", &ChannelModel::kind)
        .def_readonly("sigma_h", &ChannelModel::sigma_h)
        .def_readonly("k_factor", &ChannelModel::k_factor)
        .def_readonly("ln_mu", &ChannelModel::ln_mu)
        .def_readonly("ln_sigma", &ChannelModel::ln_sigma)
        .def("is_fading", &ChannelModel::is_fading)
        .def("mean_squared_gain", &ChannelModel::mean_squared_gain);

    py::class_<NoiseSpec>(m, "NoiseSpec")
        .def_static("from_db", &NoiseSpec::from_db, py::arg("es_n0_db"))
        .def_static("noiseless", &NoiseSpec::noiseless)
        .def_readonly("es_n0_db", &NoiseSpec::es_n0_db)
        .def("is_noiseless", &NoiseSpec::is_noiseless)
        .def("es_n0_linear", &NoiseSpec::es_n0_linear)
        .def("n0", &NoiseSpec::n0)
        .def("sigma_per_component", &NoiseSpec::sigma_per_component);

    py::class_<SquaredGainDensity>(m, "SquaredGainDensity")
        .def(py::init<const ChannelModel&>(), py::arg("model"))
        .def("pdf", &SquaredGainDensity::pdf, py::arg("z"))
        .def("survival", &SquaredGainDensity::survival, py::arg("z"))
        .def("mean", &SquaredGainDensity::mean)
        .def("quantile", &SquaredGainDensity::quantile, py::arg("p"));

    // special / analytic ---------------------------------------------------
    m.def("marcum_q1", &marcum_q1, py::arg("a"), py::arg("b"));
    m.def("noncentral_chi2_cdf", &noncentral_chi2_cdf, py::arg("t"), py::arg("lambda_"));
    m.def("bessel_i0e", &bessel_i0e, py::arg("w"));

    py::class_<RatePair>(m, "RatePair")
        .def_readonly("r_p", &RatePair::r_p)
        .def_readonly("r_c", &RatePair::r_c);

    m.def("covert_ser_awgn", &covert_ser_awgn, py::arg("es_n0"), py::arg("map"));
    m.def("mpsk_ser_awgn", &mpsk_ser_awgn, py::arg("gamma"), py::arg("order"));
    m.def("primary_ser_awgn", &primary_ser_awgn, py::arg("es_n0"), py::arg("order"),
          py::arg("map"));
    m.def("ser_fading", &ser_fading, py::arg("es_n0"), py::arg("model"), py::arg("ser_awgn"));
    m.def("covert_ser", &covert_ser, py::arg("es_n0"), py::arg("map"), py::arg("model"));
    m.def("primary_ser", &primary_ser, py::arg("es_n0"), py::arg("order"), py::arg("map"),
          py::arg("model"));
    m.def("energy_per_symbol", &energy_per_symbol, py::arg("es"), py::arg("map"));
    m.def("rate_from_ser", &rate_from_ser, py::arg("ser"), py::arg("t_s"));
    m.def("symbol_goodput", &symbol_goodput, py::arg("es_n0"), py::arg("order"), py::arg("map"),
          py::arg("t_s"), py::arg("model"));

    // optimizer ------------------------------------------------------------
    py::class_<SearchSpace>(m, "SearchSpace")
        .def(py::init<>())
        .def_readwrite("primary_orders", &SearchSpace::primary_orders)
        .def_readwrite("covert_orders", &SearchSpace::covert_orders)
        .def_readwrite("d_fractions", &SearchSpace::d_fractions);

    py::class_<RateModel>(m, "RateModel")
        .def(py::init<>())
        .def_readwrite("primary_penalty", &RateModel::primary_penalty)
        .def_readwrite("covert_penalty", &RateModel::covert_penalty)
        .def("effective_bits_primary", &RateModel::effective_bits_primary, py::arg("order"),
             py::arg("ser"))
        .def("effective_bits_covert", &RateModel::effective_bits_covert, py::arg("order"),
             py::arg("ser"));

    py::class_<OptimizationResult>(m, "OptimizationResult")
        .def_readonly("m", &OptimizationResult::m)
        .def_readonly("m_c", &OptimizationResult::m_c)
        .def_readonly("d", &OptimizationResult::d)
        .def_readonly("objective", &OptimizationResult::objective)
        .def_readonly("beta", &OptimizationResult::beta)
        .def_readonly("es_n0_db", &OptimizationResult::es_n0_db)
        .def_readonly("r_p", &OptimizationResult::r_p)
        .def_readonly("r_c", &OptimizationResult::r_c);

    m.def(
        "optimize",
        [](double es_n0_db, double beta, const SearchSpace& space, const ChannelModel& model,
           double t_s, const RateModel& rates) {
            return optimize(es_n0_db, beta, space, model, t_s, rates);
        },
        py::arg("es_n0_db"), py::arg("beta"), py::arg("space") = SearchSpace{},
        py::arg("model") = ChannelModel::awgn(), py::arg("t_s") = 4e-6,
        py::arg("rates") = RateModel{});

    // montecarlo ------------------------------------------------------------
    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("m", &SimConfig::m)
        .def_readwrite("m_c", &SimConfig::m_c)
        .def_readwrite("d", &SimConfig::d)
        .def_readwrite("channel", &SimConfig::channel)
        .def_readwrite("es_n0_db", &SimConfig::es_n0_db)
        .def_readwrite("n_symbols", &SimConfig::n_symbols)
        .def_readwrite("seed", &SimConfig::seed)
        .def_readwrite("displacement_enabled", &SimConfig::displacement_enabled)
        .def_readwrite("threads", &SimConfig::threads);

    py::class_<SerEstimate>(m, "SerEstimate")
        .def_readonly("ser_primary", &SerEstimate::ser_primary)
        .def_readonly("ser_covert", &SerEstimate::ser_covert)
        .def_readonly("n", &SerEstimate::n)
        .def_readonly("errors_primary", &SerEstimate::errors_primary)
        .def_readonly("errors_covert", &SerEstimate::errors_covert)
        .def_readonly("sigma_primary", &SerEstimate::sigma_primary)
        .def_readonly("sigma_covert", &SerEstimate::sigma_covert);

    py::class_<DetectabilityReport>(m, "DetectabilityReport")
        .def_readonly("bin_edges", &DetectabilityReport::bin_edges)
        .def_readonly("densities", &DetectabilityReport::densities)
        .def_readonly("ks_statistic", &DetectabilityReport::ks_statistic);

    m.def("estimate_ser", &estimate_ser, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("amplitude_statistics", &amplitude_statistics, py::arg("config"), py::arg("bins"),
          py::call_guard<py::gil_scoped_release>());
    m.def("scatter_export", &scatter_export, py::arg("config"), py::arg("n"),
          py::call_guard<py::gil_scoped_release>());
    m.def("ks_two_sample", &ks_two_sample, py::arg("a"), py::arg("b"));

    // ofdm ------------------------------------------------------------
    m.attr("NUM_SUBCARRIERS") = kNumSubcarriers;
    m.attr("NUM_DATA_SUBCARRIERS") = kNumDataSubcarriers;
    m.attr("CYCLIC_PREFIX_LENGTH") = kCyclicPrefixLength;
    m.attr("SUBFRAME_SAMPLES") = kSubframeSamples;
    m.attr("PACKET_PAYLOAD_BYTES") = kPacketPayloadBytes;
    m.attr("PACKET_USER_BYTES") = kPacketUserBytes;

    py::class_<PacketConfig>(m, "PacketConfig")
        .def(py::init<>())
        .def_readwrite("m", &PacketConfig::m)
        .def_readwrite("m_c", &PacketConfig::m_c)
        .def_readwrite("d", &PacketConfig::d);

    py::class_<PacketDecodeResult>(m, "PacketDecodeResult")
        .def_readonly("primary_ok", &PacketDecodeResult::primary_ok)
        .def_readonly("covert_ok", &PacketDecodeResult::covert_ok)
        .def_property_readonly(
            "primary_bytes",
            [](const PacketDecodeResult& r) { return as_py_bytes(r.primary_bytes); })
        .def_property_readonly("covert_bytes", [](const PacketDecodeResult& r) {
            return as_py_bytes(r.covert_bytes);
        });

    m.def("packet_symbol_count", &packet_symbol_count, py::arg("config"));
    m.def("packet_subframe_count", &packet_subframe_count, py::arg("config"));
    m.def(
        "build_packet",
        [](const py::bytes& primary, const py::bytes& covert, const PacketConfig& config) {
            return build_packet(as_byte_vector(primary), as_byte_vector(covert), config);
        },
        py::arg("primary_payload"), py::arg("covert_payload"), py::arg("config"));
    m.def("decode_packet", &decode_packet, py::arg("time_samples"), py::arg("config"),
          py::arg("equalize") = true);
    m.def(
        "packet_roundtrip",
        [](const py::bytes& primary, const py::bytes& covert, const PacketConfig& config,
           const ChannelModel& channel, const NoiseSpec& noise, std::uint64_t seed,
           std::uint64_t stream) {
            return packet_roundtrip(as_byte_vector(primary), as_byte_vector(covert), config,
                                    channel, noise, seed, stream);
        },
        py::arg("primary_payload"), py::arg("covert_payload"), py::arg("config"),
        py::arg("channel"), py::arg("noise"), py::arg("seed"), py::arg("stream") = 0);
    m.def(
        "crc32_ieee",
        [](const py::bytes& data) {
            const std::vector<std::uint8_t> bytes = as_byte_vector(data);
            return crc32_ieee(bytes.data(), bytes.size());
        },
        py::arg("data"));
}
