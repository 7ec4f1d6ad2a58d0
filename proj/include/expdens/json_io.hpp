///
/// \file json_io.hpp
///
/// Density file format: {"alpha": f, "terms": [{"a_re","a_im","xi_re","xi_im"}],
/// "report": {...}, "provenance": "..."}. Round-trips finite doubles exactly.
///
#ifndef EXPDENS_JSON_IO_HPP
#define EXPDENS_JSON_IO_HPP

#include <string>

#include "expdens/expsum.hpp"

namespace expdens {

std::string to_json(const ExpSumDensity& d);
ExpSumDensity from_json(const std::string& text);

void save_density(const ExpSumDensity& d, const std::string& path);
ExpSumDensity load_density(const std::string& path);

} // namespace expdens

#endif
