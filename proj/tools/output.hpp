#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace nasolv::cli {

// Fixed-width-free number formatting: %.12g, switching to exponent form above 1e6.
std::string num(double x);
std::string num(std::int64_t x);
inline std::string num(int x) { return num(static_cast<std::int64_t>(x)); }

class Table {
public:
    explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

    void add(std::vector<std::string> row);
    std::size_t rows() const { return rows_.size(); }
    std::string csv() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// Writes content to outDir/name, or to stdout when outDir is empty; returns the target.
std::string emit(const std::string& outDir, const std::string& name, const std::string& content);
std::string emit_json(const std::string& outDir, const std::string& name, const nlohmann::json& j);

std::vector<double> parse_list(const std::string& s);

}  // namespace nasolv::cli
