#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace acn {

/// Time-indexed record of per-agent observables over synchronous rounds.
/// Rounds are contiguous from 0; every snapshot carries one length-n vector
/// per declared column.
class RoundTrace {
  public:
    RoundTrace() = default;
    explicit RoundTrace(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void record(const std::vector<Eigen::VectorXd>& snapshot);
    int rounds() const { return static_cast<int>(rows_.size()); }
    const std::vector<std::string>& columns() const { return columns_; }
    /// Value of column `col` for agent `agent` at round `t`.
    double at(int t, int col, int agent) const {
        return rows_[static_cast<size_t>(t)][static_cast<size_t>(col)](agent);
    }
    const Eigen::VectorXd& vector_at(int t, int col) const {
        return rows_[static_cast<size_t>(t)][static_cast<size_t>(col)];
    }

    std::map<std::string, std::string>& metadata() { return metadata_; }
    const std::map<std::string, std::string>& metadata() const { return metadata_; }

    /// Long-format CSV: header `t,agent,<col>...`, 1-based agent ids,
    /// 15 significant digits.
    void write_csv(std::ostream& out) const;
    void write_csv_file(const std::string& path) const;

  private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Eigen::VectorXd>> rows_;
    std::map<std::string, std::string> metadata_;
};

}  // namespace acn
