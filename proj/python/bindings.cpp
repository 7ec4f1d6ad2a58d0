#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "expdens/catalog.hpp"
#include "expdens/json_io.hpp"
#include "expdens/ops.hpp"
#include "expdens/prony.hpp"

namespace py = pybind11;
using namespace expdens;

namespace {

prony::FitConfig make_config(double eps, double range, int samples,
                             std::vector<double> passes, std::uint64_t seed,
                             const std::string& method, bool renormalize)
{
    prony::FitConfig cfg;
    if (eps > 0.0) cfg.eps = eps;
    if (range > 0.0) cfg.range = range;
    if (samples > 0) cfg.n = samples;
    cfg.multipass_intervals = std::move(passes);
    cfg.seed = seed;
    if (method == "coneig") cfg.method = prony::Method::coneig;
    cfg.renormalize = renormalize;
    return cfg;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "calculus of PDFs of non-negative random variables represented as "
              "a monomial factor times a short sum of complex decaying exponentials";

    py::class_<FitReport>(m, "FitReport")
        .def_readonly("terms_kept", &FitReport::terms_kept)
        .def_readonly("sigma_ratio", &FitReport::sigma_ratio)
        .def_readonly("max_residual", &FitReport::max_residual)
        .def_readonly("passes", &FitReport::passes)
        .def_readonly("eps_reached", &FitReport::eps_reached)
        .def_readonly("truncated_tail_mass", &FitReport::truncated_tail_mass)
        .def("__repr__", [](const FitReport& r) {
            return "<FitReport terms=" + std::to_string(r.terms_kept) +
                   " residual=" + std::to_string(r.max_residual) + ">";
        });

    py::class_<ExpSumDensity>(m, "Density")
        .def(py::init([](double alpha,
                         const std::vector<std::pair<std::complex<double>,
                                                     std::complex<double>>>& terms,
                         double im_tol) {
                 std::vector<Term> ts;
                 for (const auto& [a, xi] : terms) ts.push_back(Term{a, xi});
                 return ExpSumDensity(alpha, std::move(ts), im_tol);
             }),
             py::arg("alpha"), py::arg("terms"), py::arg("im_tol") = 1e-9)
        .def_property_readonly("alpha", &ExpSumDensity::alpha)
        .def_property_readonly("terms",
                               [](const ExpSumDensity& d) {
                                   std::vector<std::pair<std::complex<double>,
                                                         std::complex<double>>> out;
                                   for (const Term& t : d.terms())
                                       out.emplace_back(t.coef, t.expo);
                                   return out;
                               })
        .def_property_readonly("report",
                               [](const ExpSumDensity& d) -> py::object {
                                   if (!d.report()) return py::none();
                                   return py::cast(*d.report());
                               })
        .def_readwrite("provenance", &ExpSumDensity::provenance)
        .def("__len__", &ExpSumDensity::size)
        .def("__call__", &ExpSumDensity::evaluate, py::arg("t"))
        .def("evaluate", &ExpSumDensity::evaluate, py::arg("t"))
        .def("evaluate_many",
             [](const ExpSumDensity& d, const std::vector<double>& ts) {
                 std::vector<double> out;
                 out.reserve(ts.size());
                 for (double t : ts) out.push_back(d.evaluate(t));
                 return out;
             })
        .def("total_mass", [](const ExpSumDensity& d) { return total_mass(d); })
        .def("moment", [](const ExpSumDensity& d, int k) { return moment(d, k); },
             py::arg("k"))
        .def("normalized", [](const ExpSumDensity& d) { return normalize(d); })
        .def("pruned",
             [](const ExpSumDensity& d, double threshold) {
                 auto r = prune(d, threshold);
                 return py::make_tuple(r.density, r.dropped_mass);
             },
             py::arg("threshold"))
        .def("to_json", [](const ExpSumDensity& d) { return to_json(d); })
        .def("__repr__", [](const ExpSumDensity& d) {
            return "<Density alpha=" + std::to_string(d.alpha()) +
                   " terms=" + std::to_string(d.size()) + ">";
        });

    m.def("from_json", &from_json, py::arg("text"));
    m.def("load", &load_density, py::arg("path"));
    m.def("save", &save_density, py::arg("density"), py::arg("path"));

    m.def(
        "fit",
        [](const std::string& spec_text, double eps, double range, int samples,
           std::vector<double> passes, std::uint64_t seed) {
            catalog::DistributionSpec spec = catalog::parse_spec(spec_text);
            auto cfg = make_config(eps, range, samples, std::move(passes), seed,
                                   "pencil", false);
            if (eps > 0.0) spec.fit.eps = cfg.eps;
            if (range > 0.0) spec.fit.range = cfg.range;
            if (samples > 0) spec.fit.n = cfg.n;
            spec.fit.multipass_intervals = cfg.multipass_intervals;
            spec.fit.seed = cfg.seed;
            return catalog::to_expsum(spec);
        },
        py::arg("spec"), py::arg("eps") = 0.0, py::arg("range") = 0.0,
        py::arg("samples") = 0, py::arg("passes") = std::vector<double>{},
        py::arg("seed") = std::uint64_t{0x9e3779b97f4a7c15ULL},
        "Bring a catalog distribution (e.g. 'gamma:2,2') into exponential-sum form");

    auto op_args = [](auto&& fn, const char* doc) { return fn; };
    (void)op_args;

#define EXPDENS_BINARY_OP(NAME, FN)                                                   \
    m.def(                                                                            \
        NAME,                                                                         \
        [](const ExpSumDensity& f, const ExpSumDensity& g, double eps, double range,  \
           int samples, std::vector<double> passes, std::uint64_t seed,               \
           const std::string& method, bool renormalize) {                             \
            return FN(f, g,                                                           \
                      make_config(eps, range, samples, std::move(passes), seed,       \
                                  method, renormalize));                              \
        },                                                                            \
        py::arg("f"), py::arg("g"), py::arg("eps") = 0.0, py::arg("range") = 0.0,     \
        py::arg("samples") = 0, py::arg("passes") = std::vector<double>{},            \
        py::arg("seed") = std::uint64_t{0x9e3779b97f4a7c15ULL},                       \
        py::arg("method") = "pencil", py::arg("renormalize") = false)

    EXPDENS_BINARY_OP("sum_pdf", ops::sum_pdf);
    EXPDENS_BINARY_OP("product_pdf", ops::product_pdf);
    EXPDENS_BINARY_OP("product_pdf_trapezoid", ops::product_pdf_trapezoid);
    EXPDENS_BINARY_OP("quotient_pdf", ops::quotient_pdf);
#undef EXPDENS_BINARY_OP

    m.def(
        "power_pdf",
        [](const ExpSumDensity& f, int k, double eps) {
            prony::FitConfig cfg;
            if (eps > 0.0) cfg.eps = eps;
            return ops::power_pdf(f, k, cfg);
        },
        py::arg("f"), py::arg("k"), py::arg("eps") = 0.0);

    m.def(
        "reduce",
        [](const ExpSumDensity& d, double eps) { return prony::reduce(d, eps); },
        py::arg("density"), py::arg("eps") = 1e-10);

    m.def(
        "expectation",
        [](const ExpSumDensity& d, const std::function<double(double)>& u, double tol) {
            return expectation(d, u, tol);
        },
        py::arg("density"), py::arg("u"), py::arg("tol") = 1e-11);
}
