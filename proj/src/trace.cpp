#include "acn/trace.hpp"

#include <fstream>
#include <ostream>
#include <stdexcept>

#include "acn/errors.hpp"

namespace acn {

void RoundTrace::record(const std::vector<Eigen::VectorXd>& snapshot) {
    if (snapshot.size() != columns_.size())
        throw InputError("trace snapshot has wrong number of columns");
    rows_.push_back(snapshot);
}

void RoundTrace::write_csv(std::ostream& out) const {
    out << "t,agent";
    for (const auto& c : columns_) out << "," << c;
    out << "\n";
    char buf[64];
    for (size_t t = 0; t < rows_.size(); ++t) {
        const auto& row = rows_[t];
        const long n = row.empty() ? 0 : row.front().size();
        for (long a = 0; a < n; ++a) {
            out << t << "," << a + 1;
            for (const auto& col : row) {
                std::snprintf(buf, sizeof buf, "%.15g", col(a));
                out << "," << buf;
            }
            out << "\n";
        }
    }
}

void RoundTrace::write_csv_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open output file: " + path);
    write_csv(out);
}

}  // namespace acn
