#include "pnask/cli.hpp"

#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pnask/analytic.hpp"
#include "pnask/iq_io.hpp"
#include "pnask/modem.hpp"
#include "pnask/montecarlo.hpp"
#include "pnask/ofdm.hpp"
#include "pnask/optimizer.hpp"
#include "pnask/version.hpp"

namespace pnask {

namespace {

using nlohmann::ordered_json;

std::string iso8601_utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm parts{};
    gmtime_r(&now, &parts);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &parts);
    return buffer;
}

ordered_json make_manifest(const std::string& command, const std::string& schema,
                           std::uint64_t seed, ordered_json parameters) {
    ordered_json manifest;
    manifest["command"] = command;
    manifest["schema"] = schema;
    manifest["version"] = PNASK_VERSION;
    manifest["seed"] = seed;
    manifest["timestamp_utc"] = iso8601_utc_now();
    manifest["parameters"] = std::move(parameters);
    return manifest;
}

void write_manifest_sidecar(const std::string& data_path, const ordered_json& manifest) {
    std::ofstream out(data_path + ".manifest.json");
    if (!out) {
        throw std::runtime_error("cannot write manifest sidecar for " + data_path);
    }
    out << manifest.dump(2) << '\n';
}

void write_json_output(const std::string& path, const ordered_json& report) {
    if (path.empty()) {
        std::cout << report.dump(2) << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open output file " + path);
    }
    out << report.dump(2) << '\n';
}

/// Shared --channel flag group.
struct ChannelArgs {
    std::string kind = "awgn";
    double sigma_h = 1.0;
    double k_factor = 1.0;
    double ln_mu = 0.0;
    double ln_sigma = 0.5;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--channel", kind, "Channel kind: awgn, rayleigh, rician, lognormal")
            ->check(CLI::IsMember({"awgn", "rayleigh", "rician", "lognormal"}));
        cmd->add_option("--sigma-h", sigma_h,
                        "Per-component gain std for rayleigh/rician (E[|h|^2] = 2 sigma_h^2)");
        cmd->add_option("--k-factor", k_factor, "Rician K factor (linear)");
        cmd->add_option("--ln-mu", ln_mu, "Log-normal mu of |h|");
        cmd->add_option("--ln-sigma", ln_sigma, "Log-normal sigma of |h|");
    }

    ChannelModel build() const {
        if (kind == "awgn") return ChannelModel::awgn();
        if (kind == "rayleigh") return ChannelModel::rayleigh(sigma_h);
        if (kind == "rician") return ChannelModel::rician(k_factor, sigma_h);
        if (kind == "lognormal") return ChannelModel::lognormal(ln_mu, ln_sigma);
        throw std::invalid_argument("unknown channel kind: " + kind);
    }

    ordered_json to_json() const {
        ordered_json j;
        j["channel"] = kind;
        if (kind == "rayleigh" || kind == "rician") j["sigma_h"] = sigma_h;
        if (kind == "rician") j["k_factor"] = k_factor;
        if (kind == "lognormal") {
            j["ln_mu"] = ln_mu;
            j["ln_sigma"] = ln_sigma;
        }
        if (kind != "awgn") j["mean_squared_gain"] = build().mean_squared_gain();
        return j;
    }
};

/// Merges a JSON config file into the token list: each key/value becomes a
/// "--key value" pair unless that flag is already present on the command
/// line, so explicit flags always win. Arrays join with commas (every list
/// option here accepts comma-separated values), booleans become bare flags.
std::vector<std::string> expand_config_tokens(std::vector<std::string> tokens) {
    std::string config_path;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (tokens[i] == "--config") {
            if (i + 1 >= tokens.size()) {
                throw std::invalid_argument("--config requires a file path");
            }
            config_path = tokens[i + 1];
            tokens.erase(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                         tokens.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
        if (tokens[i].rfind("--config=", 0) == 0) {
            config_path = tokens[i].substr(9);
            tokens.erase(tokens.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (config_path.empty()) return tokens;

    std::ifstream in(config_path);
    if (!in) {
        throw std::runtime_error("cannot open config file " + config_path);
    }
    nlohmann::json config;
    in >> config;
    if (!config.is_object()) {
        throw std::runtime_error("config file must hold a JSON object of flag values");
    }

    const auto flag_present = [&tokens](const std::string& flag) {
        for (const std::string& token : tokens) {
            if (token == flag || token.rfind(flag + "=", 0) == 0) return true;
        }
        return false;
    };

    for (const auto& [key, value] : config.items()) {
        const std::string flag = "--" + key;
        if (flag_present(flag)) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) tokens.push_back(flag);
            continue;
        }
        tokens.push_back(flag);
        if (value.is_array()) {
            std::string joined;
            for (const auto& item : value) {
                if (!joined.empty()) joined += ',';
                joined += item.is_string() ? item.get<std::string>() : item.dump();
            }
            tokens.push_back(joined);
        } else if (value.is_string()) {
            tokens.push_back(value.get<std::string>());
        } else {
            tokens.push_back(value.dump());
        }
    }
    return tokens;
}

// ---------------------------------------------------------------------------
// ser-curve

struct SerCurveArgs {
    int m = 4;
    int mc = 2;
    double d = 0.5;
    double from_db = 0.0;
    double to_db = 20.0;
    double step_db = 0.5;
    std::int64_t simulate = 0;
    std::uint64_t seed = 1;
    int threads = 1;
    ChannelArgs channel;
    std::string out;
};

void run_ser_curve(const SerCurveArgs& args) {
    if (!(args.step_db > 0.0)) {
        throw std::invalid_argument("ser-curve: --step must be positive");
    }
    if (args.to_db < args.from_db) {
        throw std::invalid_argument("ser-curve: --to must be >= --from");
    }
    const CovertCodingMap map = build_coding_map(args.mc, args.d);
    const ChannelModel model = args.channel.build();

    ordered_json params = args.channel.to_json();
    params["m"] = args.m;
    params["mc"] = args.mc;
    params["d"] = args.d;
    params["from_db"] = args.from_db;
    params["to_db"] = args.to_db;
    params["step_db"] = args.step_db;
    params["simulate"] = args.simulate;
    params["threads"] = args.threads;
    const ordered_json manifest =
        make_manifest("ser-curve", "ser-curve-csv/1", args.seed, std::move(params));

    std::ostringstream csv;
    csv << "es_n0_db,es_n0_linear,ser_covert_analytic,ser_primary_analytic";
    if (args.simulate > 0) {
        csv << ",n_trials,ser_covert_sim,sigma_covert_sim,ser_primary_sim,sigma_primary_sim";
    }
    csv << '\n';

    for (int i = 0;; ++i) {
        const double db = args.from_db + i * args.step_db;
        if (db > args.to_db + 1e-9) break;
        const double es_n0 = std::pow(10.0, db / 10.0);
        const double p_c = covert_ser(es_n0, map, model);
        const double p_p = primary_ser(es_n0, args.m, map, model);
        csv << format_number(db) << ',' << format_number(es_n0) << ',' << format_number(p_c) << ','
            << format_number(p_p);
        if (args.simulate > 0) {
            SimConfig config;
            config.m = args.m;
            config.m_c = args.mc;
            config.d = args.d;
            config.channel = model;
            config.es_n0_db = db;
            config.n_symbols = args.simulate;
            config.seed = args.seed;
            config.threads = args.threads;
            const SerEstimate estimate = estimate_ser(config);
            csv << ',' << estimate.n << ',' << format_number(estimate.ser_covert) << ','
                << format_number(estimate.sigma_covert) << ','
                << format_number(estimate.ser_primary) << ','
                << format_number(estimate.sigma_primary);
        }
        csv << '\n';
    }

    if (args.out.empty()) {
        std::cout << csv.str();
        return;
    }
    std::ofstream out(args.out);
    if (!out) {
        throw std::runtime_error("cannot open output file " + args.out);
    }
    out << csv.str();
    write_manifest_sidecar(args.out, manifest);
}

// ---------------------------------------------------------------------------
// optimize

struct OptimizeArgs {
    std::vector<std::string> points{"0:0.1", "0:0.5", "0:0.9", "15:0.1", "15:0.5", "15:0.9"};
    std::vector<int> grid_m{2, 4, 8, 16};
    std::vector<int> grid_mc{2, 4, 8};
    std::vector<double> grid_fractions{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    double t_s = 4e-6;
    bool dump_grid = false;
    ChannelArgs channel;
    std::string out;
};

void run_optimize(const OptimizeArgs& args) {
    SearchSpace space;
    space.primary_orders = args.grid_m;
    space.covert_orders = args.grid_mc;
    space.d_fractions = args.grid_fractions;
    const ChannelModel model = args.channel.build();

    ordered_json params = args.channel.to_json();
    params["points"] = args.points;
    params["grid_m"] = args.grid_m;
    params["grid_mc"] = args.grid_mc;
    params["grid_fractions"] = args.grid_fractions;
    params["t_s"] = args.t_s;
    params["dump_grid"] = args.dump_grid;

    ordered_json report;
    report["manifest"] = make_manifest("optimize", "optimize-json/1", 0, std::move(params));
    report["results"] = ordered_json::array();

    for (const std::string& point : args.points) {
        const std::size_t colon = point.find(':');
        if (colon == std::string::npos) {
            throw std::invalid_argument("optimize: --point entries must look like <es_n0_db>:<beta>");
        }
        const double db = std::stod(point.substr(0, colon));
        const double beta = std::stod(point.substr(colon + 1));

        std::vector<GridPoint> grid;
        const OptimizationResult best =
            optimize(db, beta, space, model, args.t_s, RateModel{},
                     args.dump_grid ? &grid : nullptr);

        ordered_json entry;
        entry["es_n0_db"] = best.es_n0_db;
        entry["beta"] = best.beta;
        entry["m"] = best.m;
        entry["m_c"] = best.m_c;
        entry["d"] = best.d;
        entry["objective"] = best.objective;
        entry["r_p"] = best.r_p;
        entry["r_c"] = best.r_c;
        if (args.dump_grid) {
            ordered_json grid_json = ordered_json::array();
            for (const GridPoint& g : grid) {
                ordered_json row;
                row["m"] = g.m;
                row["m_c"] = g.m_c;
                row["d"] = g.d;
                row["objective"] = g.objective;
                row["r_p"] = g.r_p;
                row["r_c"] = g.r_c;
                grid_json.push_back(std::move(row));
            }
            entry["grid"] = std::move(grid_json);
        }
        report["results"].push_back(std::move(entry));
    }
    write_json_output(args.out, report);
}

// ---------------------------------------------------------------------------
// detect

struct DetectArgs {
    int m = 8;
    int mc = 2;
    std::vector<double> d_list{0.7, 0.4, 0.2};
    double es_n0_db = 15.0;
    std::int64_t n = 1000000;
    int bins = 50;
    bool displacement = false;
    std::int64_t scatter = 0;
    std::uint64_t seed = 1;
    int threads = 1;
    ChannelArgs channel;
    std::string out_prefix = "detect";
};

void run_detect(const DetectArgs& args) {
    const ChannelModel model = args.channel.build();
    const std::vector<double> d_values = args.mc == 1 ? std::vector<double>{0.0} : args.d_list;

    ordered_json params = args.channel.to_json();
    params["m"] = args.m;
    params["mc"] = args.mc;
    params["d_list"] = d_values;
    params["es_n0_db"] = args.es_n0_db;
    params["n"] = args.n;
    params["bins"] = args.bins;
    params["displacement"] = args.displacement;
    params["scatter"] = args.scatter;
    params["threads"] = args.threads;
    const ordered_json manifest =
        make_manifest("detect", "detect-json/1", args.seed, std::move(params));

    ordered_json summary;
    summary["manifest"] = manifest;
    summary["results"] = ordered_json::array();

    for (std::size_t i = 0; i < d_values.size(); ++i) {
        SimConfig config;
        config.m = args.m;
        config.m_c = args.mc;
        config.d = d_values[i];
        config.channel = model;
        config.es_n0_db = args.es_n0_db;
        config.n_symbols = args.n;
        config.seed = args.seed;
        config.displacement_enabled = args.displacement;
        config.threads = args.threads;

        const DetectabilityReport report = amplitude_statistics(config, args.bins);

        const std::string hist_path = args.out_prefix + "_hist_" + std::to_string(i) + ".csv";
        std::ofstream hist(hist_path);
        if (!hist) {
            throw std::runtime_error("cannot open output file " + hist_path);
        }
        hist << "bin_low,bin_high,density\n";
        for (std::size_t b = 0; b + 1 < report.bin_edges.size(); ++b) {
            hist << format_number(report.bin_edges[b]) << ','
                 << format_number(report.bin_edges[b + 1]) << ',' << format_number(report.densities[b])
                 << '\n';
        }
        hist.close();
        ordered_json hist_manifest = manifest;
        hist_manifest["schema"] = "detect-hist-csv/1";
        hist_manifest["parameters"]["d"] = d_values[i];
        write_manifest_sidecar(hist_path, hist_manifest);

        ordered_json entry;
        entry["d"] = d_values[i];
        entry["ks_statistic"] = report.ks_statistic;
        entry["histogram_csv"] = hist_path;

        if (args.scatter > 0) {
            const std::vector<Sample> samples = scatter_export(config, args.scatter);
            const std::string scatter_path =
                args.out_prefix + "_scatter_" + std::to_string(i) + ".csv";
            std::ofstream sc(scatter_path);
            if (!sc) {
                throw std::runtime_error("cannot open output file " + scatter_path);
            }
            sc << "re,im\n";
            for (const Sample& s : samples) {
                sc << format_number(s.real()) << ',' << format_number(s.imag()) << '\n';
            }
            sc.close();
            ordered_json scatter_manifest = manifest;
            scatter_manifest["schema"] = "detect-scatter-csv/1";
            scatter_manifest["parameters"]["d"] = d_values[i];
            write_manifest_sidecar(scatter_path, scatter_manifest);
            entry["scatter_csv"] = scatter_path;
        }
        summary["results"].push_back(std::move(entry));
    }

    const std::string summary_path = args.out_prefix + "_summary.json";
    std::ofstream out(summary_path);
    if (!out) {
        throw std::runtime_error("cannot open output file " + summary_path);
    }
    out << summary.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// ofdm-loopback

struct LoopbackArgs {
    std::int64_t packets = 100;
    int m = 4;
    int mc = 2;
    double d = 0.5;
    double es_n0_db = 25.0;
    bool noise_free = false;
    std::uint64_t seed = 1;
    ChannelArgs channel;
    std::string payload_file;
    std::string covert_file;
    std::string primary_out;
    std::string covert_out;
    std::string save_iq;
    std::string out;
};

std::vector<std::uint8_t> read_binary_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open payload file " + path);
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_binary_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open output file " + path);
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

std::vector<std::uint8_t> file_chunk(const std::vector<std::uint8_t>& bytes, std::int64_t index) {
    const std::int64_t begin = index * kPacketUserBytes;
    if (begin >= static_cast<std::int64_t>(bytes.size())) return {};
    const std::int64_t end =
        std::min<std::int64_t>(begin + kPacketUserBytes, static_cast<std::int64_t>(bytes.size()));
    return {bytes.begin() + begin, bytes.begin() + end};
}

void run_loopback(const LoopbackArgs& args) {
    PacketConfig config;
    config.m = args.m;
    config.m_c = args.mc;
    config.d = args.d;
    const ChannelModel model = args.channel.build();
    const NoiseSpec noise =
        args.noise_free ? NoiseSpec::noiseless() : NoiseSpec::from_db(args.es_n0_db);
    const bool covert_active = args.mc > 1;

    std::vector<std::uint8_t> primary_source;
    std::vector<std::uint8_t> covert_source;
    const bool file_mode = !args.payload_file.empty();
    if (!args.payload_file.empty()) primary_source = read_binary_file(args.payload_file);
    if (!args.covert_file.empty()) {
        if (!covert_active) {
            throw std::invalid_argument("ofdm-loopback: --covert-file requires --mc > 1");
        }
        covert_source = read_binary_file(args.covert_file);
    }

    std::int64_t packets = args.packets;
    if (file_mode) {
        const auto chunks = [](std::size_t size) {
            return static_cast<std::int64_t>((size + kPacketUserBytes - 1) / kPacketUserBytes);
        };
        packets = std::max<std::int64_t>(
            {1, chunks(primary_source.size()), chunks(covert_source.size())});
    }
    if (packets < 1) {
        throw std::invalid_argument("ofdm-loopback: need at least one packet");
    }

    std::int64_t primary_ok = 0;
    std::int64_t covert_ok = 0;
    std::int64_t symbol_errors_primary = 0;
    std::int64_t symbol_errors_covert = 0;
    std::vector<std::uint8_t> primary_decoded;
    std::vector<std::uint8_t> covert_decoded;
    std::vector<Sample> iq_capture;

    for (std::int64_t p = 0; p < packets; ++p) {
        std::vector<std::uint8_t> primary_payload;
        std::vector<std::uint8_t> covert_payload;
        if (file_mode) {
            primary_payload = file_chunk(primary_source, p);
            covert_payload = file_chunk(covert_source, p);
        } else {
            Rng payload_rng = make_stream_rng(args.seed, 0x4000000000000000ULL +
                                                             static_cast<std::uint64_t>(p));
            std::uniform_int_distribution<int> byte(0, 255);
            primary_payload.resize(kPacketUserBytes);
            for (auto& b : primary_payload) b = static_cast<std::uint8_t>(byte(payload_rng));
            if (covert_active) {
                covert_payload.resize(kPacketUserBytes);
                for (auto& b : covert_payload) b = static_cast<std::uint8_t>(byte(payload_rng));
            }
        }
        if (!covert_active) covert_payload.clear();

        const std::vector<Sample> tx = build_packet(primary_payload, covert_payload, config);
        if (!args.save_iq.empty()) {
            iq_capture.insert(iq_capture.end(), tx.begin(), tx.end());
        }

        // Same stream construction as packet_roundtrip, inlined so the
        // received waveform is available for symbol-error counting.
        Rng rng = make_stream_rng(args.seed, static_cast<std::uint64_t>(p));
        std::vector<Sample> rx;
        rx.reserve(tx.size());
        const int subframes = packet_subframe_count(config);
        for (int f = 0; f < subframes; ++f) {
            const Sample h = draw_gain(model, rng);
            for (int i = 0; i < kSubframeSamples; ++i) {
                rx.push_back(h * tx[static_cast<std::size_t>(f * kSubframeSamples + i)] +
                             draw_noise(noise, rng));
            }
        }

        const PacketDecodeResult result = decode_packet(rx, config, true);
        const std::vector<SymbolPair> sent = demodulate_packet_symbols(tx, config, false);
        const std::vector<SymbolPair> received = demodulate_packet_symbols(rx, config, true);
        for (std::size_t s = 0; s < sent.size(); ++s) {
            if (received[s].primary_index != sent[s].primary_index) ++symbol_errors_primary;
            if (received[s].covert_index != sent[s].covert_index) ++symbol_errors_covert;
        }

        if (result.primary_ok) {
            ++primary_ok;
            primary_decoded.insert(primary_decoded.end(), result.primary_bytes.begin(),
                                   result.primary_bytes.end());
        }
        if (result.covert_ok) {
            ++covert_ok;
            covert_decoded.insert(covert_decoded.end(), result.covert_bytes.begin(),
                                  result.covert_bytes.end());
        }
    }

    if (!args.primary_out.empty()) write_binary_file(args.primary_out, primary_decoded);
    if (!args.covert_out.empty()) write_binary_file(args.covert_out, covert_decoded);

    ordered_json params = args.channel.to_json();
    params["packets"] = packets;
    params["m"] = args.m;
    params["mc"] = args.mc;
    params["d"] = args.d;
    params["es_n0_db"] = args.noise_free ? "noise-free" : format_number(args.es_n0_db);
    params["payload_file"] = args.payload_file;
    params["covert_file"] = args.covert_file;
    ordered_json report;
    report["manifest"] =
        make_manifest("ofdm-loopback", "ofdm-loopback-json/1", args.seed, std::move(params));
    report["packets"] = packets;
    report["symbols_per_packet"] = packet_symbol_count(config);
    report["subframes_per_packet"] = packet_subframe_count(config);

    ordered_json primary_report;
    primary_report["ok_packets"] = primary_ok;
    primary_report["success_rate"] = static_cast<double>(primary_ok) / static_cast<double>(packets);
    primary_report["symbol_errors"] = symbol_errors_primary;
    if (file_mode) primary_report["bytes_match"] = primary_decoded == primary_source;
    report["primary"] = std::move(primary_report);

    ordered_json covert_report;
    covert_report["ok_packets"] = covert_ok;
    covert_report["success_rate"] = static_cast<double>(covert_ok) / static_cast<double>(packets);
    covert_report["symbol_errors"] = symbol_errors_covert;
    if (file_mode && !args.covert_file.empty()) {
        covert_report["bytes_match"] = covert_decoded == covert_source;
    }
    report["covert"] = std::move(covert_report);

    if (!args.save_iq.empty()) {
        write_iq(args.save_iq, iq_capture);
        report["iq_file"] = args.save_iq;
    }
    write_json_output(args.out, report);
}

}  // namespace

std::string format_number(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"PN-ASK covert modulation toolkit"};
    app.require_subcommand(1);

    SerCurveArgs ser_args;
    DetectArgs detect_args;
    OptimizeArgs optimize_args;
    LoopbackArgs loopback_args;

    CLI::App* ser = app.add_subcommand(
        "ser-curve", "Analytic (and optionally simulated) SER sweep over Es/N0");
    ser->add_option("--m", ser_args.m, "Primary modulation order");
    ser->add_option("--mc", ser_args.mc, "Covert modulation order");
    ser->add_option("--d", ser_args.d, "Covert amplitude step");
    ser->add_option("--from", ser_args.from_db, "Sweep start, dB");
    ser->add_option("--to", ser_args.to_db, "Sweep end, dB (inclusive)");
    ser->add_option("--step", ser_args.step_db, "Sweep step, dB");
    ser->add_option("--simulate", ser_args.simulate, "Monte Carlo trials per point (0 = off)");
    ser->add_option("--seed", ser_args.seed, "Simulation seed")->envname("PNASK_SEED");
    ser->add_option("--threads", ser_args.threads, "Worker thread cap for simulation");
    ser->add_option("--out", ser_args.out, "Output CSV path (stdout when omitted)");
    ser->add_option("--config", "JSON file mirroring these flags (expanded upfront)");
    ser_args.channel.add_to(ser);

    CLI::App* opt = app.add_subcommand("optimize", "Weighted-rate grid optimization");
    opt->add_option("--point", optimize_args.points,
                    "Operating points as <es_n0_db>:<beta> (repeatable or comma separated)")
        ->delimiter(',');
    opt->add_option("--grid-m", optimize_args.grid_m, "Primary order candidates")->delimiter(',');
    opt->add_option("--grid-mc", optimize_args.grid_mc, "Covert order candidates")->delimiter(',');
    opt->add_option("--grid-fractions", optimize_args.grid_fractions,
                    "d grid as fractions of 1/(m_c-1)")
        ->delimiter(',');
    opt->add_option("--ts", optimize_args.t_s, "Symbol period, seconds");
    opt->add_flag("--dump-grid", optimize_args.dump_grid, "Attach every evaluated grid point");
    opt->add_option("--out", optimize_args.out, "Output JSON path (stdout when omitted)");
    opt->add_option("--config", "JSON file mirroring these flags (expanded upfront)");
    optimize_args.channel.add_to(opt);

    CLI::App* det = app.add_subcommand(
        "detect", "Amplitude histograms and KS detectability statistics");
    det->add_option("--m", detect_args.m, "Primary modulation order");
    det->add_option("--mc", detect_args.mc, "Covert modulation order");
    det->add_option("--d", detect_args.d_list, "Amplitude steps to evaluate (comma separated)")
        ->delimiter(',');
    det->add_option("--es-n0-db", detect_args.es_n0_db, "Operating Es/N0, dB");
    det->add_option("--n", detect_args.n, "Samples per run");
    det->add_option("--bins", detect_args.bins, "Histogram bin count");
    det->add_flag("--displacement", detect_args.displacement, "Enable pseudo-noise displacement");
    det->add_option("--scatter", detect_args.scatter,
                    "Also export this many equalized samples per run");
    det->add_option("--seed", detect_args.seed, "Simulation seed")->envname("PNASK_SEED");
    det->add_option("--threads", detect_args.threads, "Worker thread cap");
    det->add_option("--out-prefix", detect_args.out_prefix, "Prefix for output files");
    det->add_option("--config", "JSON file mirroring these flags (expanded upfront)");
    detect_args.channel.add_to(det);

    CLI::App* loop = app.add_subcommand("ofdm-loopback",
                                        "Packet modulate/frame/channel/decode loop");
    loop->add_option("--packets", loopback_args.packets, "Packet count (generated payload mode)");
    loop->add_option("--m", loopback_args.m, "Primary payload modulation order");
    loop->add_option("--mc", loopback_args.mc, "Covert payload modulation order");
    loop->add_option("--d", loopback_args.d, "Covert amplitude step");
    loop->add_option("--es-n0-db", loopback_args.es_n0_db, "Operating Es/N0, dB");
    loop->add_flag("--noise-free", loopback_args.noise_free, "Disable noise entirely");
    loop->add_option("--seed", loopback_args.seed, "Channel/payload seed")->envname("PNASK_SEED");
    loop->add_option("--payload-file", loopback_args.payload_file,
                     "Stream this file over the primary channel in 92-byte chunks");
    loop->add_option("--covert-file", loopback_args.covert_file,
                     "Stream this file over the covert channel");
    loop->add_option("--primary-out", loopback_args.primary_out, "Write decoded primary bytes here");
    loop->add_option("--covert-out", loopback_args.covert_out, "Write decoded covert bytes here");
    loop->add_option("--save-iq", loopback_args.save_iq, "Write the transmit waveform (cf32_le)");
    loop->add_option("--out", loopback_args.out, "Output JSON path (stdout when omitted)");
    loop->add_option("--config", "JSON file mirroring these flags (expanded upfront)");
    loopback_args.channel.add_to(loop);

    try {
        std::vector<std::string> tokens;
        tokens.reserve(static_cast<std::size_t>(argc > 0 ? argc - 1 : 0));
        for (int i = 1; i < argc; ++i) tokens.emplace_back(argv[i]);
        tokens = expand_config_tokens(std::move(tokens));
        std::reverse(tokens.begin(), tokens.end());
        app.parse(std::move(tokens));
    } catch (const CLI::ParseError& error) {
        return app.exit(error);
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        return 1;
    }

    try {
        if (app.got_subcommand(ser)) {
            run_ser_curve(ser_args);
        } else if (app.got_subcommand(opt)) {
            run_optimize(optimize_args);
        } else if (app.got_subcommand(det)) {
            run_detect(detect_args);
        } else if (app.got_subcommand(loop)) {
            run_loopback(loopback_args);
        }
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace pnask
