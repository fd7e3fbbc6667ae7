#include "whichpath/textio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "whichpath/error.hpp"

namespace whichpath {

namespace {

constexpr int kSignificantDigits = 9;

std::string line_error(const std::string& source, std::size_t line, const std::string& what) {
    return source + ":" + std::to_string(line) + ": " + what;
}

bool is_comment_or_blank(std::string_view line) {
    const auto t = trim(line);
    return t.empty() || t.front() == '#';
}

// Comma-separated when the line has a comma, otherwise whitespace-separated.
std::vector<std::string_view> fields_of(std::string_view line) {
    if (line.find(',') != std::string_view::npos) return split(line, ',');
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        if (i >= line.size()) break;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        out.push_back(line.substr(start, i - start));
    }
    return out;
}

}  // namespace

std::string format_fixed9(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) return "0.00000000";
    const int exponent = static_cast<int>(std::floor(std::log10(std::abs(value))));
    int decimals = std::max(0, kSignificantDigits - 1 - exponent);
    char buf[512];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    std::string s(buf);
    // Rounding can carry into a new leading digit (9.99999999995 -> 10.000000000).
    const auto digits = std::count_if(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
    const bool leading_zero = std::abs(value) < 1.0;
    if (!leading_zero && digits > kSignificantDigits && decimals > 0) {
        std::snprintf(buf, sizeof buf, "%.*f", decimals - 1, value);
        s = buf;
    }
    return s;
}

std::string format_shortest(double value) {
    if (std::isnan(value)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string_view trim(std::string_view text) {
    const auto ws = " \t\r\n";
    const auto b = text.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = text.find_last_not_of(ws);
    return text.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view text, char delimiter) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(delimiter, start);
        out.push_back(trim(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_double(std::string_view text) {
    const auto t = trim(text);
    if (t.empty()) fail(ErrorCode::parse, "expected a number, found nothing");
    std::string_view body = t;
    if (body.front() == '+') body.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(body.data(), body.data() + body.size(), v);
    if (res.ec != std::errc() || res.ptr != body.data() + body.size()) {
        fail(ErrorCode::parse, "not a number: '" + std::string(t) + "'");
    }
    return v;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) text_ += ',';
        text_ += header[i];
    }
    text_ += '\n';
}

CsvWriter& CsvWriter::row(const std::vector<std::string>& cells) {
    require(cells.size() == columns_, "csv row width does not match its header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) text_ += ',';
        text_ += cells[i];
    }
    text_ += '\n';
    return *this;
}

void CsvWriter::save(const std::string& path) const { write_text_file(path, text_); }

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::io, "cannot open '" + path + "' for writing");
    out << text;
    out.close();
    if (!out) fail(ErrorCode::io, "failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

MeasuredSpectrum parse_spectrum(std::string_view text, const std::string& source_name) {
    MeasuredSpectrum out;
    std::size_t line_no = 0;
    std::size_t columns = 0;
    bool header_seen = false;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        const auto line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        start = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;
        if (is_comment_or_blank(line)) continue;

        const auto fields = fields_of(trim(line));
        const bool numeric_start = !fields.empty() && !fields[0].empty() &&
                                   (std::isdigit(static_cast<unsigned char>(fields[0][0])) ||
                                    fields[0][0] == '-' || fields[0][0] == '+' || fields[0][0] == '.');
        if (!header_seen && out.wavelengths.empty() && !numeric_start) {
            header_seen = true;
            continue;
        }
        if (fields.size() < 2 || fields.size() > 3) {
            fail(ErrorCode::parse, line_error(source_name, line_no, "expected 2 or 3 columns, found " +
                                                                        std::to_string(fields.size())));
        }
        if (columns == 0) {
            columns = fields.size();
            if (columns == 3) out.uncertainties.emplace();
        } else if (fields.size() != columns) {
            fail(ErrorCode::parse, line_error(source_name, line_no, "column count changed from " +
                                                                        std::to_string(columns)));
        }
        double values[3] = {0.0, 0.0, 0.0};
        for (std::size_t c = 0; c < fields.size(); ++c) {
            try {
                values[c] = parse_double(fields[c]);
            } catch (const Error& e) {
                fail(ErrorCode::parse, line_error(source_name, line_no, e.what()));
            }
            if (!std::isfinite(values[c])) {
                fail(ErrorCode::parse, line_error(source_name, line_no, "value is not finite"));
            }
        }
        if (!out.wavelengths.empty() && values[0] <= out.wavelengths.back()) {
            fail(ErrorCode::parse, line_error(source_name, line_no, "wavelengths must be strictly increasing"));
        }
        if (values[1] < 0.0) fail(ErrorCode::parse, line_error(source_name, line_no, "negative density"));
        if (columns == 3 && values[2] < 0.0) {
            fail(ErrorCode::parse, line_error(source_name, line_no, "negative uncertainty"));
        }
        out.wavelengths.push_back(values[0]);
        out.densities.push_back(values[1]);
        if (columns == 3) out.uncertainties->push_back(values[2]);
    }
    if (out.wavelengths.size() < 2) {
        fail(ErrorCode::parse, source_name + ": spectrum needs at least two data rows");
    }
    return out;
}

MeasuredSpectrum read_spectrum(const std::string& path) { return parse_spectrum(read_text_file(path), path); }

std::string format_spectrum(const SpectralDensity& density, const std::vector<double>* uncertainties) {
    std::string text = uncertainties ? "wavelength_nm,density,uncertainty\n" : "wavelength_nm,density\n";
    for (std::size_t i = 0; i < density.size(); ++i) {
        text += format_shortest(density.grid().at(i));
        text += ',';
        text += format_shortest(density[i]);
        if (uncertainties) {
            text += ',';
            text += format_shortest((*uncertainties)[i]);
        }
        text += '\n';
    }
    return text;
}

void write_spectrum(const std::string& path, const SpectralDensity& density) {
    write_text_file(path, format_spectrum(density));
}

namespace {

double interpolate_series(const std::vector<double>& x, const std::vector<double>& y, double at) {
    if (at < x.front() || at > x.back()) return 0.0;
    const auto it = std::lower_bound(x.begin(), x.end(), at);
    const auto j = static_cast<std::size_t>(it - x.begin());
    if (x[j] == at) return y[j];
    const double t = (at - x[j - 1]) / (x[j] - x[j - 1]);
    return y[j - 1] + t * (y[j] - y[j - 1]);
}

// Points within this fraction of a step of a grid node count as the node.
constexpr double kSnap = 1e-6;

}  // namespace

SpectralDensity resample(const MeasuredSpectrum& s, const SpectralGrid& grid) {
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double at = grid.at(i);
        const auto it = std::lower_bound(s.wavelengths.begin(), s.wavelengths.end(), at - kSnap * grid.step());
        if (it != s.wavelengths.end() && std::abs(*it - at) <= kSnap * grid.step()) at = *it;
        out[i] = std::max(0.0, interpolate_series(s.wavelengths, s.densities, at));
    }
    return SpectralDensity(grid, std::move(out));
}

std::vector<double> resample_uncertainty(const MeasuredSpectrum& s, const SpectralGrid& grid) {
    std::vector<double> out(grid.size(), 0.0);
    if (!s.uncertainties) return out;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double at = grid.at(i);
        const auto it = std::lower_bound(s.wavelengths.begin(), s.wavelengths.end(), at - kSnap * grid.step());
        if (it != s.wavelengths.end() && std::abs(*it - at) <= kSnap * grid.step()) at = *it;
        out[i] = interpolate_series(s.wavelengths, *s.uncertainties, at);
    }
    return out;
}

SpectralGrid covering_grid(const SpectralGrid& grid, double lambda_lo, double lambda_hi) {
    const double h = grid.step();
    const double tol = kSnap;
    std::size_t below = 0, above = 0;
    if (lambda_lo < grid.lambda_min()) {
        below = static_cast<std::size_t>(std::ceil((grid.lambda_min() - lambda_lo) / h - tol));
    }
    if (lambda_hi > grid.lambda_max()) {
        above = static_cast<std::size_t>(std::ceil((lambda_hi - grid.lambda_max()) / h - tol));
    }
    return grid.extended(below, above);
}

}  // namespace whichpath
