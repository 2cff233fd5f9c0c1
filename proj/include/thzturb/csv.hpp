#ifndef THZTURB_CSV_HPP
#define THZTURB_CSV_HPP

#include <string>
#include <vector>

namespace thzturb::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

// Reads a numeric CSV with one header line. '#' lines and blank lines are
// skipped. Throws std::runtime_error on I/O or parse failure.
Table read(const std::string& path);

// Validates that the header matches exactly the expected column names.
void require_header(const Table& table, const std::vector<std::string>& expected,
                    const std::string& what);

}  // namespace thzturb::csv

#endif
