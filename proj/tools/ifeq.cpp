// ifeq: integer-forcing equalization toolkit
//
// Subcommands: filter, bound, analyze, simulate, fig-two-tap,
// fig-two-tap-complex, fig-random-pdf, check-delay.
// Exit codes: 0 success, 2 input error, 3 model/numeric error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ifeq/errors.hpp"
#include "ifeq/json_io.hpp"

namespace {

using ifeq::io::json;

std::string read_arg_or_file(const std::string& arg) {
    if (!arg.empty() && arg[0] == '@') {
        std::ifstream in(arg.substr(1));
        if (!in) throw ifeq::InputDomainError("cannot open file " + arg.substr(1));
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
    return arg;
}

json parse_json_arg(const std::string& arg, const char* what) {
    try {
        return json::parse(read_arg_or_file(arg));
    } catch (const json::parse_error& e) {
        throw ifeq::InputDomainError(std::string("bad ") + what + ": " + e.what());
    }
}

ifeq::Poly parse_channel(const std::string& arg) {
    return ifeq::io::poly_from_json(parse_json_arg(arg, "channel"));
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (text.empty() || text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw ifeq::InputDomainError("cannot write " + out_path);
    out << text;
}

double snr_db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

struct FigCommon {
    std::string out;
    int threads = 0;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"integer-forcing equalization toolkit"};
    app.require_subcommand(1);

    std::string channel_arg, out_path, mode_str = "zf", code_arg = "uncoded", format;
    double snr_db = 20.0;
    int nmax = 0;
    int threads = 0;
    double lll_delta = 0.75;

    // filter
    auto* cmd_filter = app.add_subcommand("filter", "search the integer feedback filter I(D)");
    cmd_filter->add_option("--channel", channel_arg, "channel taps as JSON (or @file)")->required();
    cmd_filter->add_option("--mode", mode_str, "zf or mmse")->capture_default_str();
    cmd_filter->add_option("--snr", snr_db, "SNR in dB (MMSE mode)")->capture_default_str();
    cmd_filter->add_option("--nmax", nmax, "largest filter length to try (0 = default)");
    cmd_filter->add_option("--lll-delta", lll_delta, "LLL reduction parameter")->capture_default_str();
    cmd_filter->add_option("--out", out_path, "write output to a file");

    // bound
    auto* cmd_bound = app.add_subcommand("bound", "noise-enhancement bound per filter length");
    cmd_bound->add_option("--channel", channel_arg, "channel taps as JSON (or @file)")->required();
    cmd_bound->add_option("--nmax", nmax, "largest n in the table (0 = p+30)");
    cmd_bound->add_option("--out", out_path, "write output to a file");

    // analyze
    auto* cmd_analyze = app.add_subcommand("analyze", "roots, sigma^2_ZF-DFE, alpha, capacity, gap");
    cmd_analyze->add_option("--channel", channel_arg, "channel taps as JSON (or @file)")->required();
    cmd_analyze->add_option("--snr", snr_db, "SNR in dB")->capture_default_str();
    cmd_analyze->add_option("--nmax", nmax, "filter search length bound (0 = default)");
    cmd_analyze->add_option("--out", out_path, "write output to a file");

    // simulate
    std::string config_arg, decoder_str = "auto", filter_arg;
    long long trials = 1000, q = 4, noise_samples = 200'000;
    int block_len = 64, M = 0;
    std::uint64_t seed = 1;
    bool dither_on = false, dither_off = false, noiseless = false;
    auto* cmd_sim = app.add_subcommand("simulate", "Monte Carlo run of the full receiver chain");
    cmd_sim->add_option("--config", config_arg, "full config as JSON (or @file); flags override");
    cmd_sim->add_option("--channel", channel_arg, "channel taps as JSON (or @file)");
    cmd_sim->add_option("--snr", snr_db, "SNR in dB")->capture_default_str();
    cmd_sim->add_option("--mode", mode_str, "zf or mmse")->capture_default_str();
    cmd_sim->add_option("--code", code_arg, "uncoded, parity5, hamming74, or {N,K,q,g} JSON/@file")
        ->capture_default_str();
    cmd_sim->add_option("--q", q, "alphabet size for uncoded runs")->capture_default_str();
    cmd_sim->add_option("--M", M, "multilevel bit layers (binary code)");
    cmd_sim->add_option("--trials", trials, "number of blocks")->capture_default_str();
    cmd_sim->add_option("--block-len", block_len, "block length for uncoded runs")
        ->capture_default_str();
    cmd_sim->add_option("--nmax", nmax, "filter search length bound (0 = default)");
    cmd_sim->add_option("--seed", seed, "master seed")->capture_default_str();
    cmd_sim->add_flag("--dither", dither_on, "force dither on");
    cmd_sim->add_flag("--no-dither", dither_off, "force dither off");
    cmd_sim->add_flag("--noiseless", noiseless, "switch the AWGN off");
    cmd_sim->add_option("--decoder", decoder_str, "auto, ml, hard, slicer")->capture_default_str();
    cmd_sim->add_option("--filter", filter_arg, "force the integer filter, JSON array");
    cmd_sim->add_option("--threads", threads, "worker threads (0 = hardware)");
    cmd_sim->add_option("--noise-samples", noise_samples, "stream length for noise calibration")
        ->capture_default_str();
    cmd_sim->add_option("--out", out_path, "write output to a file");

    // figure sweeps
    FigCommon fig;
    double amin = -0.95, amax = 0.95, astep = 0.05;
    auto* cmd_fig1 = app.add_subcommand("fig-two-tap", "gamma vs a for H = 1 + a D (CSV)");
    cmd_fig1->add_option("--amin", amin, "grid start")->capture_default_str();
    cmd_fig1->add_option("--amax", amax, "grid end")->capture_default_str();
    cmd_fig1->add_option("--step", astep, "grid step")->capture_default_str();
    cmd_fig1->add_option("--threads", fig.threads, "worker threads");
    cmd_fig1->add_option("--out", fig.out, "write CSV to a file");

    double cstep = 0.03, cmax = 0.99;
    auto* cmd_fig2 = app.add_subcommand("fig-two-tap-complex",
                                        "gamma over the complex tap a for H = 1 + a D (CSV)");
    cmd_fig2->add_option("--step", cstep, "grid step for Re/Im")->capture_default_str();
    cmd_fig2->add_option("--amax", cmax, "largest |a|")->capture_default_str();
    cmd_fig2->add_option("--threads", fig.threads, "worker threads");
    cmd_fig2->add_option("--out", fig.out, "write CSV to a file");

    std::vector<int> p_list{3, 5, 7};
    long long samples = 10'000;
    double bin_width = 0.0;
    std::uint64_t pdf_seed = 1;
    auto* cmd_fig3 = app.add_subcommand("fig-random-pdf",
                                        "pdf of gamma for random Gaussian channels (CSV)");
    cmd_fig3->add_option("--plist", p_list, "channel degrees")->capture_default_str();
    cmd_fig3->add_option("--samples", samples, "channels per degree")->capture_default_str();
    cmd_fig3->add_option("--seed", pdf_seed, "sampling seed")->capture_default_str();
    cmd_fig3->add_option("--bin-width", bin_width, "histogram bin width in dB (0 = automatic)")
        ->capture_default_str();
    cmd_fig3->add_option("--threads", fig.threads, "worker threads");
    cmd_fig3->add_option("--out", fig.out, "write CSV to a file");

    std::string a_arg = "0.9";
    std::vector<int> delay_list{1, 2, 4};
    auto* cmd_delay = app.add_subcommand("check-delay",
                                         "verify gamma(1 + a D^p) is independent of p");
    cmd_delay->add_option("--a", a_arg, "second tap, number or [re,im] JSON")->capture_default_str();
    cmd_delay->add_option("--plist", delay_list, "delays to test")->capture_default_str();
    cmd_delay->add_option("--out", out_path, "write output to a file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_filter) {
            const ifeq::Poly H = parse_channel(channel_arg);
            const auto mode = ifeq::io::mode_from_string(mode_str);
            const int n = nmax > 0 ? nmax : ifeq::default_n_max(H);
            const auto res =
                ifeq::select_filter(H, n, mode, snr_db_to_linear(snr_db), lll_delta);
            emit(ifeq::io::search_result_to_json(res).dump(2), out_path);
        } else if (*cmd_bound) {
            const ifeq::Poly H = parse_channel(channel_arg);
            const int p = H.without_delay().degree();
            const int n = nmax > 0 ? nmax : p + 30;
            emit(ifeq::io::bound_report_to_json(ifeq::minkowski_bound(H, n)).dump(2), out_path);
        } else if (*cmd_analyze) {
            const ifeq::Poly H = parse_channel(channel_arg);
            const double snr = snr_db_to_linear(snr_db);
            const auto analysis = ifeq::analyze_channel(H);
            json j = ifeq::io::analysis_to_json(analysis);
            if (analysis.paley_wiener) {
                const int n = nmax > 0 ? nmax : ifeq::default_n_max(H);
                const auto sel = ifeq::select_filter(H, n, ifeq::EqMode::ZF);
                const double gamma = sel.sigma2 / analysis.sigma2_zf_dfe;
                j["capacity_high_snr_bits"] = ifeq::capacity_high_snr(H, snr);
                j["filter"] = ifeq::io::filter_to_json(sel.filter);
                j["gamma"] = gamma;
                j["mi_lower_bound_bits"] =
                    ifeq::mi_lower_bound(H, sel.filter, snr, ifeq::EqMode::ZF);
                j["gap_db"] = ifeq::gap_to_capacity(gamma);
            }
            emit(j.dump(2), out_path);
        } else if (*cmd_sim) {
            ifeq::SimConfig cfg;
            if (!config_arg.empty())
                cfg = ifeq::io::sim_config_from_json(parse_json_arg(config_arg, "config"));
            if (!channel_arg.empty()) {
                cfg.channel = parse_channel(channel_arg);
                cfg.random_channel.reset();
            }
            if (cmd_sim->count("--snr")) cfg.snr_db = snr_db;
            if (cmd_sim->count("--mode")) cfg.mode = ifeq::io::mode_from_string(mode_str);
            if (cmd_sim->count("--code")) {
                if (code_arg == "uncoded")
                    cfg.code.reset();
                else if (code_arg == "parity5" || code_arg == "hamming74")
                    cfg.code = ifeq::io::code_from_json(json(code_arg));
                else
                    cfg.code = ifeq::io::code_from_json(parse_json_arg(code_arg, "code"));
            }
            if (cmd_sim->count("--q")) cfg.q = q;
            if (cmd_sim->count("--M")) cfg.M = M;
            if (cmd_sim->count("--trials")) cfg.trials = trials;
            if (cmd_sim->count("--block-len")) cfg.block_len = block_len;
            if (cmd_sim->count("--nmax")) cfg.n_max = nmax;
            if (cmd_sim->count("--seed")) cfg.seed = seed;
            if (dither_on && dither_off)
                throw ifeq::InputDomainError("--dither and --no-dither conflict");
            if (dither_on) cfg.dither = true;
            if (dither_off) cfg.dither = false;
            if (noiseless) cfg.noiseless = true;
            if (cmd_sim->count("--decoder")) {
                json d = decoder_str;
                cfg = [&] {  // reuse the json-side validation
                    json merged = ifeq::io::sim_config_to_json(cfg);
                    merged["decoder"] = d;
                    return ifeq::io::sim_config_from_json(merged);
                }();
            }
            if (!filter_arg.empty())
                cfg.force_filter = ifeq::io::filter_from_json(parse_json_arg(filter_arg, "filter"));
            if (cmd_sim->count("--threads")) cfg.threads = threads;
            if (cmd_sim->count("--noise-samples")) cfg.noise_samples = noise_samples;

            const auto result = ifeq::run(cfg);
            emit(ifeq::io::sim_result_to_json(result, cfg).dump(2), out_path);
        } else if (*cmd_fig1) {
            std::vector<double> grid;
            for (double a = amin; a <= amax + 1e-12; a += astep)
                if (std::abs(a) > 1e-12) grid.push_back(a);
            const auto rows = ifeq::two_tap_real_rows(grid, fig.threads);
            const json meta = {{"amin", amin}, {"amax", amax}, {"step", astep}};
            std::ostringstream os;
            ifeq::write_two_tap_real_csv(os, rows, meta.dump());
            emit(os.str(), fig.out);
        } else if (*cmd_fig2) {
            const auto rows = ifeq::two_tap_complex_rows(cstep, cmax, fig.threads);
            const json meta = {{"step", cstep}, {"amax", cmax},
                               {"search", "enumeration for n<=4 plus LLL for larger n"}};
            std::ostringstream os;
            ifeq::write_two_tap_complex_csv(os, rows, meta.dump());
            emit(os.str(), fig.out);
        } else if (*cmd_fig3) {
            std::vector<ifeq::RandomPdfSweep> sweeps;
            for (int p : p_list)
                sweeps.push_back(ifeq::random_channel_pdf(p, samples, pdf_seed, fig.threads));
            const json meta = {{"plist", p_list}, {"samples", samples}, {"seed", pdf_seed}};
            std::ostringstream os;
            ifeq::write_random_pdf_csv(os, sweeps, bin_width, meta.dump());
            emit(os.str(), fig.out);
        } else if (*cmd_delay) {
            const json aj = parse_json_arg(a_arg, "a");
            ifeq::cplx a;
            if (aj.is_number())
                a = ifeq::cplx{aj.get<double>(), 0.0};
            else if (aj.is_array() && aj.size() == 2)
                a = ifeq::cplx{aj[0].get<double>(), aj[1].get<double>()};
            else
                throw ifeq::InputDomainError("--a must be a number or [re, im]");
            const auto rep = ifeq::delay_invariance_check(a, delay_list);
            emit(ifeq::io::delay_report_to_json(rep).dump(2), out_path);
        }
    } catch (const ifeq::InputDomainError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const ifeq::ModelError& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
