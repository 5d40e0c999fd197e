#include "trigdens/io.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace trigdens::io {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

void write_dataset_csv(std::ostream& os, const Dataset& data) {
    os << "x\n";
    for (double x : data.samples) os << format_double(x) << "\n";
}

void write_dataset_csv(const std::string& path, const Dataset& data) {
    std::ostringstream buf;
    write_dataset_csv(buf, data);
    write_text_file(path, buf.str());
}

Dataset read_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);
    Dataset out;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty dataset file: " + path);
    if (line != "x" && line != "x\r")
        throw std::runtime_error("dataset file missing 'x' header: " + path);
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        char* end = nullptr;
        const double v = std::strtod(line.c_str(), &end);
        if (end == line.c_str() || *end != '\0') {
            std::ostringstream msg;
            msg << "bad value in " << path << " line " << lineno << ": '" << line << "'";
            throw std::runtime_error(msg.str());
        }
        if (v < 0.0 || v > 1.0) {
            std::ostringstream msg;
            msg << "sample outside [0,1] in " << path << " line " << lineno;
            throw std::runtime_error(msg.str());
        }
        out.samples.push_back(v);
    }
    if (out.samples.empty()) throw std::runtime_error("dataset has no rows: " + path);
    return out;
}

void write_density_csv(std::ostream& os, const GridDensity& f) {
    os << "x,f\n";
    const int m = f.grid_size();
    for (int i = 0; i < m; ++i)
        os << format_double((i + 0.5) / m) << "," << format_double(f.values[i]) << "\n";
}

void write_density_csv(const std::string& path, const GridDensity& f) {
    std::ostringstream buf;
    write_density_csv(buf, f);
    write_text_file(path, buf.str());
}

void write_comparison_csv(const std::string& path, const GridDensity& truth,
                          const GridDensity& est9, const GridDensity& est10) {
    std::ostringstream buf;
    buf << "x,truth,est9,est10\n";
    const int m = truth.grid_size();
    for (int i = 0; i < m; ++i)
        buf << format_double((i + 0.5) / m) << "," << format_double(truth.values[i]) << ","
            << format_double(est9.values[i]) << "," << format_double(est10.values[i]) << "\n";
    write_text_file(path, buf.str());
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace trigdens::io
