#include <iomanip>
#include <ostream>

#include "fracvrp/bounds.hpp"

namespace fracvrp {

void write_bound_csv_header(std::ostream& out) {
  out << "name,procedure,%B,%PB,columns,Iter,Time\n";
}

void write_bound_csv(std::ostream& out, const std::string& name, const std::vector<BoundReport>& reports,
                     double reference) {
  auto pct = [&](double v) { return 100.0 * v / reference; };
  for (const BoundReport& r : reports) {
    out << name << ',' << r.procedure << ',' << std::fixed << std::setprecision(1) << pct(r.dual_bound) << ',';
    if (r.primal) out << pct(r.primal->value.value());
    out << ',' << r.columns << ',' << r.iterations << ',' << std::setprecision(2) << r.elapsed << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

}  // namespace fracvrp
