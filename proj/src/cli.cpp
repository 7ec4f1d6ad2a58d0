#include "expdens/cli.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "expdens/catalog.hpp"
#include "expdens/json_io.hpp"
#include "expdens/ops.hpp"
#include "expdens/specfun.hpp"

namespace expdens::cli {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt17(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct FitOptions {
    double eps = 0.0;
    double range = 0.0;
    int samples = 0;
    std::string passes;
    std::string method;
    std::uint64_t seed = 0;
    bool have_seed = false;
    bool renormalize = false;

    void attach(CLI::App* cmd)
    {
        cmd->add_option("--eps", eps, "target accuracy");
        cmd->add_option("--range", range, "fitting range R");
        cmd->add_option("--samples", samples, "N (2N+1 samples per pass)");
        cmd->add_option("--passes", passes, "multipass right endpoints b1,b2,...");
        cmd->add_option("--method", method)->check(CLI::IsMember({"pencil", "coneig"}));
        cmd->add_option("--seed", seed)->each([this](const std::string&) { have_seed = true; });
        cmd->add_flag("--renormalize", renormalize, "rescale output mass to one");
    }

    void apply(prony::FitConfig& cfg) const
    {
        if (eps > 0.0) cfg.eps = eps;
        if (range > 0.0) cfg.range = range;
        if (samples > 0) cfg.n = samples;
        if (!passes.empty()) {
            cfg.multipass_intervals.clear();
            std::stringstream ss(passes);
            std::string piece;
            while (std::getline(ss, piece, ','))
                cfg.multipass_intervals.push_back(std::stod(piece));
        }
        if (method == "coneig") cfg.method = prony::Method::coneig;
        if (method == "pencil") cfg.method = prony::Method::pencil;
        if (have_seed) cfg.seed = seed;
        cfg.renormalize = renormalize;
        if (const char* env = std::getenv("EXPDENS_SEED"); env && !have_seed)
            cfg.seed = std::strtoull(env, nullptr, 10);
    }
};

ExpSumDensity load_input(const std::string& arg, std::istream& in,
                         const FitOptions& opts)
{
    if (arg == "-") {
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        return from_json(text);
    }
    if (std::filesystem::exists(arg)) return load_density(arg);
    catalog::DistributionSpec spec = catalog::parse_spec(arg);
    opts.apply(spec.fit);
    return catalog::to_expsum(spec);
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out)
{
    if (out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + out_path);
    f << text;
}

std::vector<double> parse_grid(const std::string& log_grid, const std::string& lin_grid,
                               const std::string& at)
{
    std::vector<double> ts;
    auto parse3 = [](const std::string& s, double& a, double& b, int& n) {
        std::stringstream ss(s);
        std::string p;
        std::vector<std::string> parts;
        while (std::getline(ss, p, ':')) parts.push_back(p);
        if (parts.size() != 3) throw std::invalid_argument("grid spec must be a:b:n");
        a = std::stod(parts[0]);
        b = std::stod(parts[1]);
        n = std::stoi(parts[2]);
        if (n < 1) throw std::invalid_argument("grid spec: count must be >= 1");
    };
    if (!log_grid.empty()) {
        double a, b;
        int n;
        parse3(log_grid, a, b, n);
        for (int i = 0; i < n; ++i)
            ts.push_back(std::pow(10.0, a + (b - a) * (n == 1 ? 0.0 : double(i) / (n - 1))));
    } else if (!lin_grid.empty()) {
        double a, b;
        int n;
        parse3(lin_grid, a, b, n);
        for (int i = 0; i < n; ++i)
            ts.push_back(a + (b - a) * (n == 1 ? 0.0 : double(i) / (n - 1)));
    } else if (!at.empty()) {
        std::stringstream ss(at);
        std::string piece;
        while (std::getline(ss, piece, ',')) ts.push_back(std::stod(piece));
    } else {
        throw std::invalid_argument("need one of --log-grid, --grid, --at");
    }
    return ts;
}

double analytic_reference(const std::string& name, double t)
{
    using std::log;
    if (name == "gamma_product_2_2_3_2") {
        if (t == 0.0) return 0.0;
        return 32.0 * std::pow(t, 1.5) *
               specfun::bessel_k(1.0, {4.0 * std::sqrt(t), 0.0}).real();
    }
    if (name == "nakagami_sq") {
        if (t == 0.0) return 0.0;
        return 4.0 * t * specfun::bessel_k(0.0, {2.0 * t, 0.0}).real();
    }
    if (name == "cauchy_abs_sq") {
        if (t <= 0.0) throw std::domain_error("cauchy_abs_sq: t must be > 0");
        const double u = t - 1.0;
        if (std::abs(u) < 1e-4) {
            // log t / (t^2-1) = (1 - u/2 + u^2/3 - u^3/4) / (t+1) + O(u^4)
            const double series = 1.0 - u / 2.0 + u * u / 3.0 - u * u * u / 4.0;
            return 4.0 / (kPi * kPi) * series / (t + 1.0);
        }
        return 4.0 / (kPi * kPi) * log(t) / (t * t - 1.0);
    }
    if (name == "exp_quotient") return 1.0 / ((1.0 + t) * (1.0 + t));
    throw std::invalid_argument("unknown analytic reference: " + name);
}

} // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err)
{
    CLI::App app{"calculus of PDFs of non-negative random variables in "
                 "monomial-times-exponential-sum form"};
    app.require_subcommand(1);

    FitOptions fopts;
    std::string out_path;
    std::string in1, in2;
    int pow_k = 2;
    int moments_k = 1;
    std::string log_grid, lin_grid, at_list, analytic, prod_path = "bessel";

    auto* fit = app.add_subcommand("fit", "fit a catalog distribution");
    fit->add_option("dist", in1)->required();

    auto* sum = app.add_subcommand("sum", "PDF of X + Y");
    sum->add_option("x", in1)->required();
    sum->add_option("y", in2)->required();

    auto* prod = app.add_subcommand("prod", "PDF of X * Y");
    prod->add_option("x", in1)->required();
    prod->add_option("y", in2)->required();
    prod->add_option("--path", prod_path)->check(CLI::IsMember({"bessel", "trapezoid"}));

    auto* quot = app.add_subcommand("quot", "PDF of X / Y");
    quot->add_option("x", in1)->required();
    quot->add_option("y", in2)->required();

    auto* power = app.add_subcommand("pow", "PDF of X^k, k a power of two");
    power->add_option("x", in1)->required();
    power->add_option("--k", pow_k)->required();

    auto* reduce = app.add_subcommand("reduce", "re-compress a density");
    reduce->add_option("x", in1)->required();

    auto* eval = app.add_subcommand("eval", "evaluate a density on a grid (CSV)");
    eval->add_option("x", in1)->required();

    auto* moments = app.add_subcommand("moments", "raw moments m_0..m_k (CSV)");
    moments->add_option("x", in1)->required();
    moments->add_option("--k", moments_k);

    auto* compare = app.add_subcommand("compare",
                                       "log10 error against an analytic reference (CSV)");
    compare->add_option("x", in1)->required();
    compare->add_option("--analytic", analytic)->required();

    for (CLI::App* c : {fit, sum, prod, quot, power, reduce}) {
        fopts.attach(c);
        c->add_option("--out", out_path, "output file (default: stdout)");
    }
    for (CLI::App* c : {eval, compare}) {
        c->add_option("--log-grid", log_grid, "start-exp:end-exp:count");
        c->add_option("--grid", lin_grid, "start:end:count");
        c->add_option("--out", out_path);
    }
    eval->add_option("--at", at_list, "comma-separated abscissae");
    moments->add_option("--out", out_path);

    try {
        std::vector<std::string> argv(args);
        std::reverse(argv.begin(), argv.end());
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return 0;
        }
        err << "{\"error\": \"usage: " << e.what() << "\"}\n";
        return 2;
    }

    try {
        prony::FitConfig cfg;
        fopts.apply(cfg);

        auto emit_density = [&](const ExpSumDensity& d) {
            emit(to_json(d), out_path, out);
        };

        if (fit->parsed()) {
            emit_density(load_input(in1, in, fopts));
        } else if (sum->parsed()) {
            emit_density(ops::sum_pdf(load_input(in1, in, fopts),
                                      load_input(in2, in, fopts), cfg));
        } else if (prod->parsed()) {
            const auto x = load_input(in1, in, fopts);
            const auto y = load_input(in2, in, fopts);
            emit_density(prod_path == "trapezoid" ? ops::product_pdf_trapezoid(x, y, cfg)
                                                  : ops::product_pdf(x, y, cfg));
        } else if (quot->parsed()) {
            emit_density(ops::quotient_pdf(load_input(in1, in, fopts),
                                           load_input(in2, in, fopts), cfg));
        } else if (power->parsed()) {
            emit_density(ops::power_pdf(load_input(in1, in, fopts), pow_k, cfg));
        } else if (reduce->parsed()) {
            const auto x = load_input(in1, in, fopts);
            emit_density(prony::reduce(x, cfg.eps, cfg));
        } else if (eval->parsed()) {
            const auto d = load_input(in1, in, fopts);
            std::ostringstream csv;
            csv << "t,value\n";
            for (double t : parse_grid(log_grid, lin_grid, at_list))
                csv << fmt17(t) << "," << fmt17(d.evaluate(t)) << "\n";
            emit(csv.str(), out_path, out);
        } else if (moments->parsed()) {
            const auto d = load_input(in1, in, fopts);
            std::ostringstream csv;
            csv << "k,moment\n";
            for (int k = 0; k <= moments_k; ++k)
                csv << k << "," << fmt17(moment(d, k)) << "\n";
            emit(csv.str(), out_path, out);
        } else if (compare->parsed()) {
            const auto d = load_input(in1, in, fopts);
            std::ostringstream csv;
            csv << "x,log10_abs_error\n";
            for (double t : parse_grid(log_grid, lin_grid, at_list)) {
                const double ref = analytic_reference(analytic, t);
                const double errv = std::abs(d.evaluate(t) - ref);
                csv << fmt17(std::log10(t)) << ","
                    << fmt17(std::log10(errv + 1e-300)) << "\n";
            }
            emit(csv.str(), out_path, out);
        }
    } catch (const std::exception& e) {
        err << "{\"error\": \"" << e.what() << "\"}\n";
        return 1;
    }
    return 0;
}

int run_main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cin, std::cout, std::cerr);
}

} // namespace expdens::cli
