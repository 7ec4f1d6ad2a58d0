#include "expdens/json_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace expdens {

namespace {

using nlohmann::json;

json report_to_json(const FitReport& r)
{
    return json{{"terms_kept", r.terms_kept},
                {"sigma_ratio", r.sigma_ratio},
                {"max_residual", r.max_residual},
                {"passes", r.passes},
                {"eps_reached", r.eps_reached},
                {"pruned_all", r.pruned_all},
                {"empty_result", r.empty_result},
                {"sigma0", r.sigma0},
                {"cond_estimate", r.cond_estimate},
                {"truncated_tail_mass", r.truncated_tail_mass}};
}

FitReport report_from_json(const json& j)
{
    FitReport r;
    r.terms_kept = j.value("terms_kept", 0);
    r.sigma_ratio = j.value("sigma_ratio", 0.0);
    r.max_residual = j.value("max_residual", 0.0);
    r.passes = j.value("passes", 1);
    r.eps_reached = j.value("eps_reached", true);
    r.pruned_all = j.value("pruned_all", false);
    r.empty_result = j.value("empty_result", false);
    r.sigma0 = j.value("sigma0", 0.0);
    r.cond_estimate = j.value("cond_estimate", 0.0);
    r.truncated_tail_mass = j.value("truncated_tail_mass", 0.0);
    return r;
}

} // namespace

std::string to_json(const ExpSumDensity& d)
{
    json terms = json::array();
    for (const Term& t : d.terms()) {
        terms.push_back(json{{"a_re", t.coef.real()},
                             {"a_im", t.coef.imag()},
                             {"xi_re", t.expo.real()},
                             {"xi_im", t.expo.imag()}});
    }
    json j{{"alpha", d.alpha()}, {"terms", std::move(terms)}, {"im_tol", d.im_tol()}};
    if (d.report()) j["report"] = report_to_json(*d.report());
    if (!d.provenance.empty()) j["provenance"] = d.provenance;
    return j.dump(2) + "\n";
}

ExpSumDensity from_json(const std::string& text)
{
    json j = json::parse(text);
    if (!j.contains("alpha") || !j.contains("terms"))
        throw std::invalid_argument("density JSON: missing required keys alpha/terms");
    std::vector<Term> terms;
    for (const auto& t : j.at("terms")) {
        terms.push_back(Term{{t.at("a_re").get<double>(), t.at("a_im").get<double>()},
                             {t.at("xi_re").get<double>(), t.at("xi_im").get<double>()}});
    }
    std::optional<FitReport> rep;
    if (j.contains("report")) rep = report_from_json(j.at("report"));
    ExpSumDensity d(j.at("alpha").get<double>(), std::move(terms),
                    j.value("im_tol", 1e-9), rep);
    d.provenance = j.value("provenance", std::string{});
    return d;
}

void save_density(const ExpSumDensity& d, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << to_json(d);
}

ExpSumDensity load_density(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return from_json(text);
}

} // namespace expdens
