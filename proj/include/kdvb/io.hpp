#pragma once

// CSV and JSON serialisation of sampled solutions. Numbers are written with
// std::to_chars, so output is locale-independent and byte-identical across
// runs; poles become empty cells (CSV) or nulls (JSON) with pole_flag = 1.

#include <array>
#include <charconv>
#include <fstream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "kdvb/errors.hpp"
#include "kdvb/solutions.hpp"

namespace kdvb {

/// 17 significant digits: enough to round-trip any double.
inline std::string format_number(double value) {
  std::array<char, 40> buf{};
  const auto res =
      std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
  if (res.ec != std::errc{}) throw DomainError("number formatting failed");
  return {buf.data(), res.ptr};
}

/// Coordinate columns followed by re_u, im_u, pole_flag.
struct SampleTable {
  std::vector<std::string> coords;
  std::vector<std::vector<double>> coord_rows;
  std::vector<Sampled> values;

  void add(std::vector<double> coordinates, Sampled value) {
    coord_rows.push_back(std::move(coordinates));
    values.push_back(value);
  }
  std::size_t size() const { return values.size(); }
};

enum class Format { Csv, Json };

inline Format parse_format(std::string_view name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw DomainError("unknown format '" + std::string(name) + "' (expected csv or json)");
}

inline std::string_view format_extension(Format f) { return f == Format::Csv ? ".csv" : ".json"; }

inline void write_csv(std::ostream& out, const SampleTable& table) {
  for (const auto& c : table.coords) out << c << ',';
  out << "re_u,im_u,pole_flag\n";
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (const double c : table.coord_rows[i]) out << format_number(c) << ',';
    if (const auto& v = table.values[i])
      out << format_number(v->real()) << ',' << format_number(v->imag()) << ",0\n";
    else
      out << ",,1\n";
  }
}

/// Array of row objects with the CSV column names as keys.
inline nlohmann::ordered_json to_json(const SampleTable& table) {
  auto rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < table.size(); ++i) {
    nlohmann::ordered_json row;
    for (std::size_t c = 0; c < table.coords.size(); ++c)
      row[table.coords[c]] = table.coord_rows[i][c];
    if (const auto& v = table.values[i]) {
      row["re_u"] = v->real();
      row["im_u"] = v->imag();
      row["pole_flag"] = 0;
    } else {
      row["re_u"] = nullptr;
      row["im_u"] = nullptr;
      row["pole_flag"] = 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline void write_table(std::ostream& out, const SampleTable& table, Format format) {
  if (format == Format::Csv) {
    write_csv(out, table);
  } else {
    out << to_json(table).dump(1) << '\n';
  }
}

inline void write_table_file(const std::string& path, const SampleTable& table, Format format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot open '" + path + "' for writing");
  write_table(out, table, format);
  if (!out) throw DomainError("failed writing '" + path + "'");
}

// ---------------------------------------------------------------------------
// Table builders

inline SampleTable reduced_table(std::span<const double> theta, std::span<const Sampled> values) {
  SampleTable t;
  t.coords = {"theta"};
  for (std::size_t i = 0; i < theta.size(); ++i) t.add({theta[i]}, values[i]);
  return t;
}

inline SampleTable physical_table(std::span<const double> x, double time,
                                  std::span<const Sampled> values) {
  SampleTable t;
  t.coords = {"x", "t"};
  for (std::size_t i = 0; i < x.size(); ++i) t.add({x[i], time}, values[i]);
  return t;
}

inline SampleTable sweep_table(const SweepSurface& surface) {
  SampleTable t;
  t.coords = {"a", "theta"};
  for (std::size_t ia = 0; ia < surface.a.size(); ++ia)
    for (std::size_t it = 0; it < surface.theta.size(); ++it)
      t.add({surface.a[ia], surface.theta[it]}, surface.at(ia, it));
  return t;
}

}  // namespace kdvb
