#include "maxent/pmf_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

#include "maxent/errors.hpp"

namespace maxent {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

std::string format_exact(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    if (ec != std::errc{}) throw Error("format_exact: conversion failed");
    return std::string(buf, end);
}

void write_pmf(std::ostream& out, const Pmf& p, std::string_view comment) {
    if (!comment.empty()) {
        std::size_t start = 0;
        while (start <= comment.size()) {
            const auto nl = comment.find('\n', start);
            const auto line = comment.substr(start, nl == std::string_view::npos ? nl : nl - start);
            out << "# " << line << '\n';
            if (nl == std::string_view::npos) break;
            start = nl + 1;
        }
    }
    for (double v : p.probs()) out << format_exact(v) << '\n';
}

Pmf read_pmf(std::istream& in) {
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (const auto hash = view.find('#'); hash != std::string_view::npos) {
            view = view.substr(0, hash);
        }
        view = trim(view);
        if (view.empty()) continue;
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(view.data(), view.data() + view.size(), v);
        if (ec != std::errc{} || ptr != view.data() + view.size()) {
            throw ValidationError("read_pmf: line " + std::to_string(line_no) +
                                  " is not a number: '" + std::string(view) + "'");
        }
        values.push_back(v);
    }
    return Pmf(std::move(values));
}

void write_pmf_file(const std::filesystem::path& path, const Pmf& p, std::string_view comment) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    write_pmf(out, p, comment);
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Pmf read_pmf_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return read_pmf(in);
}

}  // namespace maxent
