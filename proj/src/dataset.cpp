#include "sldiff/dataset.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <utility>
#include <vector>

namespace sldiff {

namespace {

// U.S. electricity production from natural gas sources, % of total, 1990-2023.
constexpr std::array<std::pair<double, double>, 34> kUsNatgas{{
    {1990, 11.85815}, {1991, 12.27868}, {1992, 12.97155}, {1993, 12.92770},
    {1994, 14.16742}, {1995, 14.76346}, {1996, 13.02046}, {1997, 13.67453},
    {1998, 14.57905}, {1999, 14.93086}, {2000, 15.65117}, {2001, 17.07274},
    {2002, 17.58605}, {2003, 16.41918}, {2004, 17.52281}, {2005, 18.22920},
    {2006, 19.59561}, {2007, 21.03976}, {2008, 20.83612}, {2009, 22.67735},
    {2010, 23.24735}, {2011, 24.03179}, {2012, 29.47220}, {2013, 26.90093},
    {2014, 26.75654}, {2015, 31.79336}, {2016, 32.81091}, {2017, 31.20787},
    {2018, 34.09804}, {2019, 37.33868}, {2020, 39.43958}, {2021, 37.35339},
    {2022, 38.71585}, {2023, 41.90800},
}};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

double parse_number(std::string_view field, int line_no, const char* what) {
    field = trim(field);
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ParseError("line " + std::to_string(line_no) + ": cannot parse " + what + " '" +
                         std::string(field) + "'");
    }
    return out;
}

}  // namespace

TimeSeries builtin_series(const std::string& id) {
    if (id != kBuiltinUsNatgas) {
        throw InvalidInput("unknown builtin dataset '" + id + "'");
    }
    std::vector<double> t, v;
    t.reserve(kUsNatgas.size());
    v.reserve(kUsNatgas.size());
    for (const auto& [year, value] : kUsNatgas) {
        t.push_back(year);
        v.push_back(value);
    }
    return TimeSeries(t, v, kBuiltinUsNatgas);
}

TimeSeries load_series(std::istream& in, const std::string& label) {
    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) {
        throw ParseError("line 1: empty input, expected header 'time,value'");
    }
    ++line_no;
    if (!line.empty() && static_cast<unsigned char>(line[0]) == 0xEF && line.size() >= 3) {
        line.erase(0, 3);  // strip UTF-8 BOM
    }
    {
        auto comma = line.find(',');
        std::string_view h1 = comma == std::string::npos ? std::string_view(line)
                                                         : std::string_view(line).substr(0, comma);
        std::string_view h2 =
            comma == std::string::npos ? std::string_view() : std::string_view(line).substr(comma + 1);
        if (trim(h1) != "time" || trim(h2) != "value") {
            throw ParseError("line 1: expected header 'time,value'");
        }
    }

    std::vector<double> times, values;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw ParseError("line " + std::to_string(line_no) + ": expected 'time,value'");
        }
        double t = parse_number(std::string_view(line).substr(0, comma), line_no, "time");
        double v = parse_number(std::string_view(line).substr(comma + 1), line_no, "value");
        if (!(v > 0.0)) {
            throw ValidationError("line " + std::to_string(line_no) +
                                  ": value must be strictly positive");
        }
        if (!(t > 0.0)) {
            throw ValidationError("line " + std::to_string(line_no) + ": time must be positive");
        }
        if (!times.empty() && t <= times.back()) {
            throw ValidationError("line " + std::to_string(line_no) +
                                  ": times must be strictly increasing");
        }
        times.push_back(t);
        values.push_back(v);
    }
    return TimeSeries(times, values, label);
}

TimeSeries load_series_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open '" + path + "'");
    }
    return load_series(in, path);
}

}  // namespace sldiff
