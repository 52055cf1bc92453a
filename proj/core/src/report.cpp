#include "reordermon/report.hpp"

#include <ostream>

namespace reordermon {

std::string_view to_string(ReportSource s) {
  switch (s) {
    case ReportSource::ArrayEviction: return "array_eviction";
    case ReportSource::ArrayFlush: return "array_flush";
    case ReportSource::HhEviction: return "hh_eviction";
    case ReportSource::HhFlush: return "hh_flush";
  }
  return "?";
}

void write_reports(std::ostream& out, std::span<const Report> reports) {
  out << "prefix,n,o,source\n";
  for (const auto& r : reports) {
    out << to_string(r.prefix) << ',' << r.n << ',' << r.o << ',' << to_string(r.source) << '\n';
  }
}

}  // namespace reordermon
