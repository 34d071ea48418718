// Batch front end: certificate search, witness construction, and sweep
// reports for lower bounds on the Bernstein-type constant K_N.
//
// Exit codes: 0 success, 1 input error, 2 no certificate, 3 resource cap.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ornstein/certificate.hpp"
#include "ornstein/pipeline.hpp"
#include "ornstein/selftest.hpp"
#include "ornstein/witness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNoCertificate = 2;
constexpr int kExitResourceCap = 3;

std::size_t term_cap_from_env() {
    if (const char* v = std::getenv("ORNSTEIN_CAP")) {
        const long long parsed = std::atoll(v);
        if (parsed > 0) return static_cast<std::size_t>(parsed);
    }
    return ornstein::kDefaultTermCap;
}

ornstein::DerivativeSystem load_system(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open input file: " + path);
    const nlohmann::json j = nlohmann::json::parse(in);
    return ornstein::validated(j.get<ornstein::DerivativeSystem>());
}

ornstein::Variant resolve_variant(const ornstein::Certificate& cert, const std::string& requested) {
    using ornstein::Variant;
    if (requested == "T1" || requested == "t1") {
        if (!cert.t1()) throw ornstein::no_certificate("Theorem 1 does not apply to this system");
        return Variant::T1;
    }
    if (requested == "T2" || requested == "t2") {
        if (!cert.t2()) throw ornstein::no_certificate("Theorem 2 does not apply to this system");
        return Variant::T2;
    }
    if (requested == "auto") {
        if (cert.t2()) return Variant::T2;
        if (cert.t1()) return Variant::T1;
        throw ornstein::no_certificate("neither theorem applies to this system");
    }
    throw std::invalid_argument("unknown variant: " + requested);
}

ornstein::Mode resolve_mode(const std::string& mode) { return ornstein::mode_from_string(mode); }

std::string json_mirror_path(const std::string& csv_path) {
    if (csv_path.size() > 4 && csv_path.substr(csv_path.size() - 4) == ".csv")
        return csv_path.substr(0, csv_path.size() - 4) + ".json";
    return csv_path + ".json";
}

int cmd_cert(const std::string& system_path, int box, const std::string& out_path) {
    const auto sys = load_system(system_path);
    const auto cert = ornstein::certify(sys, box);
    const nlohmann::json j = cert;
    std::cout << j.dump(2) << '\n';
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw std::invalid_argument("cannot write " + out_path);
        out << j.dump(2) << '\n';
    }
    if (!cert.t1() && !cert.t2()) {
        std::cerr << "no theorem applies: equal pairings exist but neither the ordering nor the "
                     "parity condition holds\n";
        return kExitNoCertificate;
    }
    return kExitOk;
}

int cmd_build(const std::string& system_path, int n, const std::string& variant,
              const std::string& mode, int base_m, int box, const std::string& dump_path,
              std::size_t term_cap) {
    const auto sys = load_system(system_path);
    const auto cert = ornstein::certify(sys, box);

    ornstein::WitnessParams params;
    params.sys = sys;
    params.cert = cert;
    params.n = n;
    params.variant = resolve_variant(cert, variant);
    params.mode = resolve_mode(mode);
    params.base_m = base_m;

    const auto family = ornstein::WitnessFamily::build(params);
    const auto w = family.w_poly(term_cap);
    const std::string dump = w.dump();
    if (dump_path.empty()) {
        std::cout << dump;
    } else {
        std::ofstream out(dump_path);
        if (!out) throw std::invalid_argument("cannot write " + dump_path);
        out << dump;
    }
    std::cerr << "variant " << to_string(params.variant) << ", n = " << n << ", "
              << w.term_count() << " terms, degree " << w.degree() << '\n';
    return kExitOk;
}

int cmd_sweep(const std::string& system_path, int n_from, int n_to, std::uint64_t samples,
              std::uint64_t seed, const std::string& variant, const std::string& mode, int base_m,
              int box, const std::string& out_path, std::string json_path, std::size_t term_cap) {
    if (samples < 2) throw std::invalid_argument("--samples must be at least 2");
    if (n_from < 1 || n_to < n_from) throw std::invalid_argument("bad n range");

    const auto sys = load_system(system_path);
    const auto cert = ornstein::certify(sys, box);

    ornstein::WitnessParams params;
    params.sys = sys;
    params.cert = cert;
    params.variant = resolve_variant(cert, variant);
    params.mode = resolve_mode(mode);
    params.base_m = base_m;

    ornstein::SamplingConfig cfg;
    cfg.samples = samples;
    cfg.seed = seed;
    cfg.term_cap = term_cap;

    const auto report = ornstein::sweep(params, n_from, n_to, cfg);

    {
        std::ofstream out(out_path);
        if (!out) throw std::invalid_argument("cannot write " + out_path);
        ornstein::write_csv(out, report);
    }
    if (json_path.empty()) json_path = json_mirror_path(out_path);
    {
        std::ofstream out(json_path);
        if (!out) throw std::invalid_argument("cannot write " + json_path);
        out << nlohmann::json(report).dump(2) << '\n';
    }

    std::cout << "records: " << report.records.size() << '\n';
    if (report.exponent_fit.available) {
        std::cout << "fitted exponent (log ratio vs log log degree): " << report.exponent_fit.slope
                  << " +- " << 2 * report.exponent_fit.slope_stderr
                  << " (r2 = " << report.exponent_fit.r2 << ")\n";
    } else {
        std::cout << "fitted exponent: unavailable (needs at least 3 records)\n";
    }
    if (report.ratio_vs_n_fit.available)
        std::cout << "linear fit ratio vs n: slope " << report.ratio_vs_n_fit.slope
                  << " (r2 = " << report.ratio_vs_n_fit.r2 << ")\n";
    if (report.theoretical_phi)
        std::cout << "theoretical exponent: " << *report.theoretical_phi << " = "
                  << report.theoretical_phi->convert_to<double>() << '\n';
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << "wrote " << out_path << " and " << json_path << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"witness polynomials and certificates for Ornstein non-inequalities"};
    app.require_subcommand(1);
    app.fallthrough();  // parent flags like --threads may follow the subcommand

    int threads = 0;
    app.add_option("--threads", threads, "cap on worker threads (results are unaffected)");

    std::string system_path, out_path, dump_path, json_path;
    std::string variant = "auto", mode = "native";
    int box = ornstein::kDefaultBoxBound;
    int n = 2, n_from = 2, n_to = 6, base_m = 4;
    std::uint64_t samples = 1'000'000, seed = 1;

    auto* cert = app.add_subcommand("cert", "find certificate vectors for a derivative system");
    cert->add_option("system", system_path, "system JSON file")->required();
    cert->add_option("--box", box, "search box bound for certificate vectors");
    cert->add_option("--out", out_path, "write the certificate JSON here");

    auto* build = app.add_subcommand("build", "construct W_n and dump it in canonical form");
    build->add_option("system", system_path, "system JSON file")->required();
    build->add_option("--n", n, "number of Riesz levels")->required();
    build->add_option("--variant", variant, "T1 | T2 | auto");
    build->add_option("--mode", mode, "native | scaled");
    build->add_option("--baseM", base_m, "base for scaled mode");
    build->add_option("--box", box, "certificate search box");
    build->add_option("--dump", dump_path, "write the polynomial dump here (default stdout)");

    auto* sweep = app.add_subcommand("sweep", "certificate records over a range of n");
    sweep->add_option("system", system_path, "system JSON file")->required();
    sweep->add_option("--n-from", n_from, "first level count");
    sweep->add_option("--n-to", n_to, "last level count");
    sweep->add_option("--samples", samples, "Monte Carlo samples per norm");
    sweep->add_option("--seed", seed, "seed for the counter-based sampler");
    sweep->add_option("--variant", variant, "T1 | T2 | auto");
    sweep->add_option("--mode", mode, "native | scaled");
    sweep->add_option("--baseM", base_m, "base for scaled mode");
    sweep->add_option("--box", box, "certificate search box");
    sweep->add_option("--out", out_path, "CSV output path")->required();
    sweep->add_option("--json-out", json_path, "JSON mirror path (default: out with .json)");

    auto* selftest = app.add_subcommand("selftest", "run the built-in invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    if (threads > 0) ornstein::set_thread_limit(threads);
    const std::size_t term_cap = term_cap_from_env();

    try {
        if (cert->parsed()) return cmd_cert(system_path, box, out_path);
        if (build->parsed())
            return cmd_build(system_path, n, variant, mode, base_m, box, dump_path, term_cap);
        if (sweep->parsed())
            return cmd_sweep(system_path, n_from, n_to, samples, seed, variant, mode, base_m, box,
                             out_path, json_path, term_cap);
        if (selftest->parsed()) {
            const int failures = ornstein::selftest::run_all(std::cout);
            if (failures != 0) {
                std::cerr << failures << " selftest check(s) failed\n";
                return kExitInput;
            }
            return kExitOk;
        }
    } catch (const ornstein::cap_exceeded& e) {
        std::cerr << "resource cap: " << e.what() << '\n';
        return kExitResourceCap;
    } catch (const ornstein::no_certificate& e) {
        std::cerr << "no certificate: " << e.what() << '\n';
        return kExitNoCertificate;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitInput;
}
