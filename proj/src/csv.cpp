#include "thzturb/csv.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace thzturb::csv {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        // trim
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
    }
    return out;
}

}  // namespace

Table read(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open CSV file: " + path);
    Table table;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') continue;
        if (table.header.empty()) {
            table.header = split(line);
            continue;
        }
        const auto cells = split(line);
        if (cells.size() != table.header.size())
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected " + std::to_string(table.header.size()) +
                                     " columns, got " + std::to_string(cells.size()));
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) {
            std::size_t pos = 0;
            double v;
            try {
                v = std::stod(c, &pos);
            } catch (const std::exception&) {
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": not a number: '" + c + "'");
            }
            if (pos != c.size())
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": trailing junk in '" + c + "'");
            row.push_back(v);
        }
        table.rows.push_back(std::move(row));
    }
    if (table.header.empty()) throw std::runtime_error(path + ": empty CSV");
    return table;
}

void require_header(const Table& table, const std::vector<std::string>& expected,
                    const std::string& what) {
    if (table.header != expected) {
        std::string want;
        for (const auto& c : expected) want += (want.empty() ? "" : ",") + c;
        std::string got;
        for (const auto& c : table.header) got += (got.empty() ? "" : ",") + c;
        throw std::runtime_error(what + ": expected header '" + want + "', got '" + got + "'");
    }
}

}  // namespace thzturb::csv
