#include "ifeq/json_io.hpp"

#include <cmath>

#include "ifeq/errors.hpp"

namespace ifeq::io {

namespace {

double finite_or_null(json& j, const char* key, double v) {
    if (std::isfinite(v))
        j[key] = v;
    else
        j[key] = nullptr;
    return v;
}

}  // namespace

const char* build_version() {
#ifdef IFEQ_GIT_DESCRIBE
    return IFEQ_GIT_DESCRIBE;
#else
    return "unknown";
#endif
}

Poly poly_from_json(const json& j) {
    if (!j.is_array() || j.empty())
        throw InputDomainError("polynomial must be a non-empty JSON array");
    std::vector<cplx> coeffs;
    coeffs.reserve(j.size());
    for (const auto& e : j) {
        if (e.is_number()) {
            coeffs.emplace_back(e.get<double>(), 0.0);
        } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
            coeffs.emplace_back(e[0].get<double>(), e[1].get<double>());
        } else {
            throw InputDomainError("polynomial entries must be numbers or [re, im] pairs");
        }
    }
    return Poly(std::move(coeffs));
}

json poly_to_json(const Poly& p) {
    json out = json::array();
    for (const auto& c : p.coeffs()) {
        if (p.is_real())
            out.push_back(c.real());
        else
            out.push_back(json::array({c.real(), c.imag()}));
    }
    return out;
}

IntFilter filter_from_json(const json& j) {
    if (!j.is_array() || j.empty())
        throw InputDomainError("filter must be a non-empty JSON array");
    std::vector<long long> re, im;
    bool any_complex = false;
    for (const auto& e : j) {
        if (e.is_number_integer()) {
            re.push_back(e.get<long long>());
            im.push_back(0);
        } else if (e.is_array() && e.size() == 2) {
            re.push_back(e[0].get<long long>());
            im.push_back(e[1].get<long long>());
            any_complex = true;
        } else {
            throw InputDomainError("filter entries must be integers or [re, im] integer pairs");
        }
    }
    if (!any_complex) return IntFilter(std::move(re));
    return IntFilter(std::move(re), std::move(im));
}

json filter_to_json(const IntFilter& f) {
    json out = json::array();
    for (std::size_t k = 0; k < f.length(); ++k) {
        if (f.is_real())
            out.push_back(f.re[k]);
        else
            out.push_back(json::array({f.re[k], f.im[k]}));
    }
    return out;
}

CyclicCode code_from_json(const json& j) {
    if (j.is_string()) {
        const std::string name = j.get<std::string>();
        if (name == "parity5") return CyclicCode::parity5();
        if (name == "hamming74") return CyclicCode::hamming74();
        throw InputDomainError("unknown code alias '" + name + "' (want parity5 or hamming74)");
    }
    if (!j.is_object()) throw InputDomainError("code spec must be an object {N,K,q,g} or an alias");
    for (const char* key : {"N", "K", "q", "g"})
        if (!j.contains(key)) throw InputDomainError(std::string("code spec is missing '") + key + "'");
    return CyclicCode(j["N"].get<int>(), j["K"].get<int>(), j["q"].get<long long>(),
                      j["g"].get<std::vector<long long>>());
}

json code_to_json(const CyclicCode& c) {
    return json{{"N", c.N()}, {"K", c.K()}, {"q", c.q()}, {"g", c.g()}};
}

EqMode mode_from_string(const std::string& s) {
    if (s == "zf" || s == "ZF") return EqMode::ZF;
    if (s == "mmse" || s == "MMSE") return EqMode::MMSE;
    throw InputDomainError("mode must be 'zf' or 'mmse'");
}

SimConfig sim_config_from_json(const json& j) {
    SimConfig c;
    if (j.contains("channel")) {
        const auto& ch = j["channel"];
        if (ch.is_object() && ch.contains("random")) {
            RandomChannelSpec spec;
            spec.p = ch["random"].value("p", 3);
            spec.seed = ch["random"].value("seed", 0ull);
            c.random_channel = spec;
        } else {
            c.channel = poly_from_json(ch);
        }
    }
    c.snr_db = j.value("snr_db", c.snr_db);
    if (j.contains("mode")) c.mode = mode_from_string(j["mode"].get<std::string>());
    if (j.contains("code") && !(j["code"].is_string() && j["code"] == "uncoded"))
        c.code = code_from_json(j["code"]);
    c.M = j.value("M", c.M);
    c.n_max = j.value("n_max", c.n_max);
    c.q = j.value("q", c.q);
    c.trials = j.value("trials", c.trials);
    c.block_len = j.value("block_len", c.block_len);
    c.seed = j.value("seed", c.seed);
    if (j.contains("dither")) c.dither = j["dither"].get<bool>();
    c.noiseless = j.value("noiseless", c.noiseless);
    if (j.contains("decoder")) {
        const std::string d = j["decoder"].get<std::string>();
        if (d == "auto")
            c.decoder = DecoderKind::Auto;
        else if (d == "ml")
            c.decoder = DecoderKind::Ml;
        else if (d == "hard")
            c.decoder = DecoderKind::Hard;
        else if (d == "slicer")
            c.decoder = DecoderKind::Slicer;
        else
            throw InputDomainError("decoder must be auto, ml, hard or slicer");
    }
    if (j.contains("force_filter")) c.force_filter = filter_from_json(j["force_filter"]);
    c.threads = j.value("threads", c.threads);
    c.noise_samples = j.value("noise_samples", c.noise_samples);
    return c;
}

json sim_config_to_json(const SimConfig& c) {
    json j;
    if (c.random_channel)
        j["channel"] = json{{"random", {{"p", c.random_channel->p}, {"seed", c.random_channel->seed}}}};
    else
        j["channel"] = poly_to_json(c.channel);
    j["snr_db"] = c.snr_db;
    j["mode"] = to_string(c.mode);
    if (c.code)
        j["code"] = code_to_json(*c.code);
    else
        j["code"] = "uncoded";
    j["M"] = c.M;
    j["n_max"] = c.n_max;
    j["q"] = c.q;
    j["trials"] = c.trials;
    j["block_len"] = c.block_len;
    j["seed"] = c.seed;
    if (c.dither) j["dither"] = *c.dither;
    j["noiseless"] = c.noiseless;
    switch (c.decoder) {
        case DecoderKind::Auto: j["decoder"] = "auto"; break;
        case DecoderKind::Ml: j["decoder"] = "ml"; break;
        case DecoderKind::Hard: j["decoder"] = "hard"; break;
        case DecoderKind::Slicer: j["decoder"] = "slicer"; break;
    }
    if (c.force_filter) j["force_filter"] = filter_to_json(*c.force_filter);
    j["threads"] = c.threads;
    j["noise_samples"] = c.noise_samples;
    return j;
}

json sim_result_to_json(const SimResult& r, const SimConfig& c) {
    json j;
    j["config"] = sim_config_to_json(c);
    j["filter"] = filter_to_json(r.filter);
    j["n_used"] = r.n_used;
    j["sigma2_analytic"] = r.sigma2_analytic;
    finite_or_null(j, "sigma2_zf_dfe", r.sigma2_zf_dfe);
    finite_or_null(j, "gamma_analytic", r.gamma_analytic);
    finite_or_null(j, "bound", r.bound);
    j["sigma2_empirical"] = r.sigma2_empirical;
    finite_or_null(j, "gamma_empirical", r.gamma_empirical);
    j["noise_autocorr"] = r.noise_autocorr;
    j["trials"] = r.trials;
    j["data_symbols_per_block"] = r.data_symbols_per_block;
    j["symbol_errors"] = r.symbol_errors;
    j["symbols"] = r.symbols;
    j["block_errors"] = r.block_errors;
    j["ser"] = r.ser;
    j["ser_ci95"] = json::array({r.ser_lo, r.ser_hi});
    j["bler"] = r.bler;
    j["bler_ci95"] = json::array({r.bler_lo, r.bler_hi});
    j["runtime_sec"] = r.runtime_sec;
    j["seed"] = r.seed;
    j["N"] = r.N;
    j["q"] = r.q;
    j["version"] = build_version();
    return j;
}

json search_result_to_json(const FilterSearchResult& r) {
    json cands = json::array();
    for (const auto& c : r.candidates)
        cands.push_back(json{{"n", c.n}, {"filter", filter_to_json(c.filter)}, {"sigma2", c.sigma2}});
    return json{{"filter", filter_to_json(r.filter)},
                {"sigma2", r.sigma2},
                {"n_used", r.n_used},
                {"candidates", cands}};
}

json bound_report_to_json(const BoundReport& r) {
    json table = json::array();
    for (const auto& row : r.table) table.push_back(json{{"n", row.n}, {"value", row.value}});
    return json{{"bound", r.bound},       {"bound_db", r.bound_db}, {"n_star", r.n_star},
                {"alpha", r.alpha},       {"sigma2_zf_dfe", r.sigma2_zf_dfe},
                {"gap_db", r.gap_db},     {"table", table}};
}

json analysis_to_json(const ChannelAnalysis& a) {
    json roots = json::array();
    for (const auto& z : a.roots) roots.push_back(json::array({z.real(), z.imag()}));
    json j;
    j["roots"] = roots;
    j["paley_wiener"] = a.paley_wiener;
    if (a.paley_wiener) {
        j["sigma2_zf_dfe"] = a.sigma2_zf_dfe;
        j["alpha"] = a.alpha;
    } else {
        j["sigma2_zf_dfe"] = nullptr;
        j["alpha"] = nullptr;
    }
    return j;
}

json delay_report_to_json(const DelayCheckReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back(json{{"p", row.p},
                            {"gamma", row.gamma},
                            {"gamma_matches", row.gamma_matches},
                            {"filter_matches", row.filter_matches},
                            {"filter", filter_to_json(row.filter)}});
    return json{{"gamma_ref", r.gamma_ref},
                {"filter_ref", filter_to_json(r.filter_ref)},
                {"rows", rows},
                {"all_match", r.all_match}};
}

}  // namespace ifeq::io
