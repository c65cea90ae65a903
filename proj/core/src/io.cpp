#include "npde/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace npde {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

void write_row(std::ostream& out, const double* values, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        if (i) out << ',';
        out << format_double(values[i]);
    }
    out << '\n';
}

double parse_number(const std::string& cell) {
    std::size_t begin = cell.find_first_not_of(" \t\r");
    std::size_t end = cell.find_last_not_of(" \t\r");
    if (begin == std::string::npos) throw std::invalid_argument("empty CSV cell");
    const std::string trimmed = cell.substr(begin, end - begin + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(trimmed, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number in CSV: '" + trimmed + "'");
    }
    if (used != trimmed.size()) throw std::invalid_argument("not a number in CSV: '" + trimmed + "'");
    return v;
}

} // namespace

void write_csv(std::ostream& out, const FieldState& field) {
    const auto v = field.values();
    if (field.dims() == 1) {
        write_row(out, v.data(), v.size());
        return;
    }
    const std::size_t n = field.extent();
    for (std::size_t i = 0; i < n; ++i) write_row(out, v.data() + i * n, n);
}

void write_csv(std::ostream& out, const Stencil1D& stencil) { write_row(out, stencil.taps.data(), 3); }

void write_csv(std::ostream& out, const Stencil2D& stencil) {
    for (const auto& row : stencil.taps) write_row(out, row.data(), 3);
}

std::vector<std::vector<double>> read_csv_rows(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(parse_number(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

FieldState read_field_csv(std::istream& in) {
    const auto rows = read_csv_rows(in);
    if (rows.empty()) throw std::invalid_argument("field CSV is empty");
    if (rows.size() == 1) {
        const std::size_t n = rows[0].size();
        return FieldState(1, n, rows[0]);
    }
    const std::size_t n = rows.size();
    std::vector<double> values;
    values.reserve(n * n);
    for (const auto& r : rows) {
        if (r.size() != n) throw std::invalid_argument("2D field CSV must be square");
        values.insert(values.end(), r.begin(), r.end());
    }
    return FieldState(2, n, std::move(values));
}

void write_pgm(std::ostream& out, const FieldState& field) {
    if (field.dims() != 2) throw std::invalid_argument("PGM output needs a 2D field");
    const std::size_t n = field.extent();
    const double lo = field.min();
    const double hi = field.max();
    const double span = hi - lo;
    out << "P5\n" << n << ' ' << n << "\n255\n";
    std::string bytes(n * n, '\0');
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        const double t = span > 0.0 ? (field[i] - lo) / span : 0.0;
        bytes[i] = static_cast<char>(static_cast<unsigned char>(std::lround(std::clamp(t, 0.0, 1.0) * 255.0)));
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

void write_trajectory_slice(std::ostream& out, std::size_t label, const FieldState& slice) {
    const auto v = slice.values();
    if (slice.dims() == 1) {
        out << label << ',';
        write_row(out, v.data(), v.size());
        return;
    }
    const std::size_t n = slice.extent();
    for (std::size_t i = 0; i < n; ++i) {
        out << label << ',' << i << ',';
        write_row(out, v.data() + i * n, n);
    }
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
    for (std::size_t s = 0; s < trajectory.slices.size(); ++s) write_trajectory_slice(out, s, trajectory.slices[s]);
}

} // namespace npde
