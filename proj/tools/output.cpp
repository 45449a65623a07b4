#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace nasolv::cli {

std::string num(double x) {
    char buf[64];
    if (std::isfinite(x) && std::abs(x) > 1e6) std::snprintf(buf, sizeof buf, "%.10e", x);
    else std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string num(std::int64_t x) { return std::to_string(x); }

void Table::add(std::vector<std::string> row) {
    if (row.size() != header_.size()) throw std::logic_error("table row width mismatch");
    rows_.push_back(std::move(row));
}

std::string Table::csv() const {
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
        os << '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return os.str();
}

std::string emit(const std::string& outDir, const std::string& name, const std::string& content) {
    if (outDir.empty()) {
        std::cout << content;
        return "stdout";
    }
    std::filesystem::create_directories(outDir);
    const auto path = std::filesystem::path(outDir) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << content;
    return path.string();
}

std::string emit_json(const std::string& outDir, const std::string& name, const nlohmann::json& j) {
    return emit(outDir, name, j.dump(2) + "\n");
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(item, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad number list: " + s);
        }
        if (used != item.size()) throw std::invalid_argument("bad number list: " + s);
        v.push_back(x);
    }
    if (v.empty()) throw std::invalid_argument("empty number list");
    return v;
}

}  // namespace nasolv::cli
