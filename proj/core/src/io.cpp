#include "lraaa/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>

namespace lraaa {

namespace {

using nlohmann::json;

void append_double(std::string& out, double v, int digits = 17) {
  if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "cannot serialize a non-finite value");
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
  out.append(buf, res.ptr);
}

void append_complex(std::string& out, Complex z) {
  out += '[';
  append_double(out, z.real());
  out += ',';
  append_double(out, z.imag());
  out += ']';
}

void append_shape(std::string& out, const Shape& s) {
  out += '[';
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(s[i]);
  }
  out += ']';
}

// Writes the grid in pieces so huge tensors never need a second full-size text buffer.
template <class Sink>
void write_grid(const SampleGrid& grid, const std::vector<std::string>& names, Sink&& sink) {
  std::string buf;
  buf += "{\"format\":\"";
  buf += kGridFormat;
  buf += "\",\"axes\":[";
  for (std::size_t j = 0; j < grid.order(); ++j) {
    if (j) buf += ',';
    buf += "{\"name\":";
    buf += json(j < names.size() ? names[j] : "z" + std::to_string(j + 1)).dump();
    buf += ",\"points\":[";
    for (std::size_t i = 0; i < grid.axes[j].size(); ++i) {
      if (i) buf += ',';
      append_complex(buf, grid.axes[j][i]);
    }
    buf += "]}";
  }
  buf += "],\"data\":{\"shape\":";
  append_shape(buf, grid.data.shape());
  buf += ",\"order\":\"row-major\",\"values\":[";
  const auto vals = grid.data.values();
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (i) buf += ',';
    append_double(buf, vals[i].real());
    buf += ',';
    append_double(buf, vals[i].imag());
    if (buf.size() > (1u << 20)) {
      sink(buf);
      buf.clear();
    }
  }
  buf += "]}}\n";
  sink(buf);
}

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::kMalformedDocument, what); }

class GridSax : public nlohmann::json_sax<json> {
 public:
  enum class Ctx { kRoot, kAxes, kAxis, kPoints, kPoint, kData, kShape, kValues, kOther };

  std::string format;
  std::string order;
  bool has_order = false;
  std::vector<PointList> axes;
  Shape shape;
  bool has_shape = false;
  bool has_values = false;
  std::vector<Complex> values;
  bool dangling_real = false;

  bool null() override { return scalar_ignored(); }
  bool boolean(bool) override { return scalar_ignored(); }
  bool number_integer(number_integer_t v) override { return number(static_cast<double>(v)); }
  bool number_unsigned(number_unsigned_t v) override { return number(static_cast<double>(v)); }
  bool number_float(number_float_t v, const string_t&) override { return number(v); }
  bool binary(binary_t&) override { return scalar_ignored(); }

  bool string(string_t& s) override {
    if (stack_.empty()) malformed("grid document must be a JSON object");
    Frame& f = stack_.back();
    if (f.ctx == Ctx::kOther) return true;
    if (f.ctx == Ctx::kRoot && f.key == "format") {
      format = s;
    } else if (f.ctx == Ctx::kAxis && f.key == "name") {
      // names are informational
    } else if (f.ctx == Ctx::kData && f.key == "order") {
      order = s;
      has_order = true;
    } else {
      malformed("unexpected string in grid document");
    }
    return true;
  }

  bool start_object(std::size_t) override {
    if (stack_.empty()) {
      stack_.push_back({Ctx::kRoot, {}, 0});
      return true;
    }
    const Frame& p = stack_.back();
    Ctx c = Ctx::kOther;
    if (p.ctx == Ctx::kAxes) {
      c = Ctx::kAxis;
      axes.emplace_back();
    } else if (p.ctx == Ctx::kRoot && p.key == "data") {
      c = Ctx::kData;
    } else if (p.ctx != Ctx::kOther && p.ctx != Ctx::kRoot && p.ctx != Ctx::kAxis && p.ctx != Ctx::kData) {
      malformed("unexpected object in grid document");
    }
    stack_.push_back({c, {}, 0});
    return true;
  }

  bool key(string_t& k) override {
    stack_.back().key = k;
    return true;
  }

  bool end_object() override {
    stack_.pop_back();
    return true;
  }

  bool start_array(std::size_t) override {
    if (stack_.empty()) malformed("grid document must be a JSON object");
    const Frame& p = stack_.back();
    Ctx c = Ctx::kOther;
    if (p.ctx == Ctx::kRoot && p.key == "axes") {
      c = Ctx::kAxes;
    } else if (p.ctx == Ctx::kAxis && p.key == "points") {
      c = Ctx::kPoints;
    } else if (p.ctx == Ctx::kPoints) {
      c = Ctx::kPoint;
    } else if (p.ctx == Ctx::kData && p.key == "shape") {
      c = Ctx::kShape;
      has_shape = true;
    } else if (p.ctx == Ctx::kData && p.key == "values") {
      c = Ctx::kValues;
      has_values = true;
      if (has_shape) values.reserve(shape_product_safe());
    } else if (p.ctx == Ctx::kAxes || p.ctx == Ctx::kPoint || p.ctx == Ctx::kShape || p.ctx == Ctx::kValues) {
      malformed("unexpected array in grid document");
    }
    stack_.push_back({c, {}, 0});
    return true;
  }

  bool end_array() override {
    Frame f = stack_.back();
    stack_.pop_back();
    if (f.ctx == Ctx::kPoint) {
      if (f.count != 2) malformed("complex numbers must be [re, im] pairs");
      axes.back().emplace_back(point_[0], point_[1]);
    }
    return true;
  }

  bool parse_error(std::size_t pos, const std::string&, const nlohmann::detail::exception& ex) override {
    malformed("grid document is not valid JSON at byte " + std::to_string(pos) + ": " + ex.what());
  }

 private:
  struct Frame {
    Ctx ctx;
    std::string key;
    std::size_t count;
  };
  std::vector<Frame> stack_;
  double point_[2] = {0.0, 0.0};
  double pending_ = 0.0;

  std::size_t shape_product_safe() const {
    std::size_t n = 1;
    for (auto s : shape) {
      if (s == 0 || n > (std::size_t{1} << 34) / s) return 0;
      n *= s;
    }
    return n;
  }

  bool scalar_ignored() {
    if (stack_.empty() || stack_.back().ctx != Ctx::kOther) {
      if (!stack_.empty() && stack_.back().ctx == Ctx::kRoot) return true;
      malformed("unexpected literal in grid document");
    }
    return true;
  }

  bool number(double v) {
    if (stack_.empty()) malformed("grid document must be a JSON object");
    Frame& f = stack_.back();
    switch (f.ctx) {
      case Ctx::kPoint:
        if (f.count >= 2) malformed("complex numbers must be [re, im] pairs");
        point_[f.count++] = v;
        return true;
      case Ctx::kShape:
        if (v < 1 || v != std::floor(v)) malformed("shape entries must be positive integers");
        shape.push_back(static_cast<std::size_t>(v));
        return true;
      case Ctx::kValues:
        if (dangling_real) {
          values.emplace_back(pending_, v);
        } else {
          pending_ = v;
        }
        dangling_real = !dangling_real;
        return true;
      case Ctx::kOther:
      case Ctx::kRoot:
      case Ctx::kAxis:
      case Ctx::kData:
        return true;
      default:
        malformed("unexpected number in grid document");
    }
  }
};

SampleGrid finish_grid(GridSax& sax) {
  if (sax.format.empty()) malformed("grid document lacks a format tag");
  if (sax.format != kGridFormat) throw Error(ErrorCode::kUnsupportedVariant, "unsupported grid format '" + sax.format + "'");
  if (sax.axes.empty()) malformed("grid document has no axes");
  if (!sax.has_shape || !sax.has_values) malformed("grid document lacks data.shape or data.values");
  if (sax.has_order && sax.order != "row-major") {
    throw Error(ErrorCode::kUnsupportedVariant, "unsupported value order '" + sax.order + "'");
  }
  if (sax.dangling_real) throw Error(ErrorCode::kShapeMismatch, "data.values has an odd number of entries");
  if (sax.shape.size() != sax.axes.size()) throw Error(ErrorCode::kShapeMismatch, "data.shape does not match the axis count");
  for (std::size_t j = 0; j < sax.axes.size(); ++j) {
    if (sax.shape[j] != sax.axes[j].size()) throw Error(ErrorCode::kShapeMismatch, "axis length differs from data.shape");
  }
  std::size_t n = 1;
  for (auto s : sax.shape) n *= s;
  if (sax.values.size() != n) throw Error(ErrorCode::kShapeMismatch, "value count does not match data.shape");
  SampleGrid g{std::move(sax.axes), DenseTensor(sax.shape, std::move(sax.values))};
  g.validate();
  return g;
}

std::vector<Complex> read_values(const json& j, const char* what) {
  if (!j.is_array()) malformed(std::string(what) + " must be an array");
  if (j.size() % 2 != 0) throw Error(ErrorCode::kShapeMismatch, std::string(what) + " has an odd number of entries");
  std::vector<Complex> out(j.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!j[2 * i].is_number() || !j[2 * i + 1].is_number()) malformed(std::string(what) + " must hold numbers");
    out[i] = Complex{j[2 * i].get<double>(), j[2 * i + 1].get<double>()};
  }
  return out;
}

Shape read_shape(const json& j) {
  if (!j.is_array()) malformed("shape must be an array");
  Shape s;
  for (const auto& v : j) {
    if (!v.is_number_unsigned() || v.get<std::size_t>() == 0) malformed("shape entries must be positive integers");
    s.push_back(v.get<std::size_t>());
  }
  return s;
}

DenseTensor read_tensor(const json& j, const char* what) {
  if (!j.is_object() || !j.contains("shape") || !j.contains("values")) {
    malformed(std::string(what) + " must have shape and values");
  }
  Shape s = read_shape(j["shape"]);
  auto vals = read_values(j["values"], what);
  if (vals.size() != shape_product(s)) throw Error(ErrorCode::kShapeMismatch, std::string(what) + ": value count does not match shape");
  return DenseTensor(std::move(s), std::move(vals));
}

json write_values(std::span<const Complex> v) {
  json arr = json::array();
  for (const auto& z : v) {
    arr.push_back(z.real());
    arr.push_back(z.imag());
  }
  return arr;
}

json write_tensor(const DenseTensor& t) {
  return json{{"shape", t.shape()}, {"values", write_values(t.values())}};
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  os << text;
  if (!os) throw Error(ErrorCode::kIo, "failed writing '" + path + "'");
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

SampleGrid parse_grid(const std::string& text) {
  GridSax sax;
  json::sax_parse(text, &sax);
  return finish_grid(sax);
}

SampleGrid load_grid(const std::string& path) {
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> f(std::fopen(path.c_str(), "rb"), &std::fclose);
  if (!f) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  GridSax sax;
  json::sax_parse(f.get(), &sax);
  return finish_grid(sax);
}

std::string serialize_grid(const SampleGrid& grid, const std::vector<std::string>& axis_names) {
  grid.validate();
  std::string out;
  write_grid(grid, axis_names, [&](const std::string& chunk) { out += chunk; });
  return out;
}

void save_grid(const SampleGrid& grid, const std::string& path, const std::vector<std::string>& axis_names) {
  grid.validate();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  write_grid(grid, axis_names, [&](const std::string& chunk) { os.write(chunk.data(), static_cast<std::streamsize>(chunk.size())); });
  if (!os) throw Error(ErrorCode::kIo, "failed writing '" + path + "'");
}

std::string serialize_model(const BarycentricModel& model) {
  model.validate();
  json doc;
  doc["format"] = kModelFormat;
  json nodes = json::array();
  for (const auto& lam : model.nodes) {
    json axis = json::array();
    for (const auto& z : lam) axis.push_back({z.real(), z.imag()});
    nodes.push_back(std::move(axis));
  }
  doc["nodes"] = std::move(nodes);
  doc["H"] = write_tensor(model.interpolated);
  if (const auto* cp = std::get_if<CPFactors>(&model.coeffs)) {
    json factors = json::array();
    for (const auto& m : cp->factors()) {
      std::vector<Complex> rm;
      for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index k = 0; k < m.cols(); ++k) rm.push_back(m(i, k));
      factors.push_back(json{{"rows", m.rows()}, {"cols", m.cols()}, {"values", write_values(rm)}});
    }
    doc["coeffs"] = json{{"kind", "cp"}, {"rank", cp->rank()}, {"factors", std::move(factors)}};
  } else {
    json c = write_tensor(std::get<DenseTensor>(model.coeffs));
    c["kind"] = "full";
    doc["coeffs"] = std::move(c);
  }
  return doc.dump() + "\n";
}

BarycentricModel parse_model(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    malformed(std::string("model document is not valid JSON: ") + e.what());
  }
  try {
    if (!doc.is_object() || !doc.contains("format")) malformed("model document lacks a format tag");
    const auto fmt = doc["format"].get<std::string>();
    if (fmt != kModelFormat) throw Error(ErrorCode::kUnsupportedVariant, "unsupported model format '" + fmt + "'");
    if (!doc.contains("nodes") || !doc.contains("H") || !doc.contains("coeffs")) malformed("model document is incomplete");

    BarycentricModel m;
    for (const auto& axis : doc["nodes"]) {
      PointList lam;
      for (const auto& z : axis) {
        if (!z.is_array() || z.size() != 2) malformed("complex numbers must be [re, im] pairs");
        lam.emplace_back(z[0].get<double>(), z[1].get<double>());
      }
      m.nodes.push_back(std::move(lam));
    }
    m.interpolated = read_tensor(doc["H"], "H");

    const json& c = doc["coeffs"];
    const auto kind = c.at("kind").get<std::string>();
    if (kind == "full") {
      m.coeffs = read_tensor(c, "coeffs");
    } else if (kind == "cp") {
      std::vector<Matrix> factors;
      for (const auto& f : c.at("factors")) {
        const auto rows = f.at("rows").get<Eigen::Index>();
        const auto cols = f.at("cols").get<Eigen::Index>();
        const auto vals = read_values(f.at("values"), "factor values");
        if (rows < 1 || cols < 1 || vals.size() != static_cast<std::size_t>(rows * cols)) {
          throw Error(ErrorCode::kShapeMismatch, "factor value count does not match rows x cols");
        }
        Matrix mat(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
          for (Eigen::Index k = 0; k < cols; ++k) mat(i, k) = vals[static_cast<std::size_t>(i * cols + k)];
        factors.push_back(std::move(mat));
      }
      if (c.contains("rank") && !factors.empty() && c["rank"].get<Eigen::Index>() != factors.front().cols()) {
        throw Error(ErrorCode::kShapeMismatch, "declared CP rank does not match the factors");
      }
      m.coeffs = CPFactors(std::move(factors));
    } else {
      throw Error(ErrorCode::kUnsupportedVariant, "unsupported coefficient kind '" + kind + "'");
    }
    m.validate();
    return m;
  } catch (const json::exception& e) {
    malformed(std::string("model document has an invalid field: ") + e.what());
  }
}

BarycentricModel load_model(const std::string& path) { return parse_model(read_text_file(path)); }

void save_model(const BarycentricModel& model, const std::string& path) { write_text_file(path, serialize_model(model)); }

std::string format_dat(const DatTable& table) {
  if (table.names.size() != table.columns.size()) throw Error(ErrorCode::kDimensionMismatch, "one name per column required");
  const std::size_t rows = table.columns.empty() ? 0 : table.columns.front().size();
  for (const auto& c : table.columns)
    if (c.size() != rows) throw Error(ErrorCode::kDimensionMismatch, "dat columns differ in length");
  std::string out = "#";
  if (!table.schema.empty()) out += " " + table.schema + ":";
  for (const auto& n : table.names) out += " " + n;
  out += '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c) out += ' ';
      const double v = table.columns[c][r];
      if (std::isfinite(v)) {
        append_double(out, v, 16);
      } else {
        out += std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
      }
    }
    out += '\n';
  }
  return out;
}

void emit_dat(const DatTable& table, const std::string& path) { write_text_file(path, format_dat(table)); }

DatTable parse_dat(const std::string& text) {
  DatTable t;
  std::istringstream is(text);
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (header) continue;
      header = true;
      std::istringstream hs(line.substr(1));
      std::string tok;
      while (hs >> tok) {
        if (t.names.empty() && t.schema.empty() && tok.back() == ':') {
          t.schema = tok.substr(0, tok.size() - 1);
          continue;
        }
        t.names.push_back(tok);
      }
      t.columns.assign(t.names.size(), {});
      continue;
    }
    std::istringstream ls(line);
    std::string tok;
    std::size_t c = 0;
    while (ls >> tok) {
      if (c >= t.columns.size()) malformed("dat row has more fields than the header");
      double v = 0.0;
      const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) malformed("dat field '" + tok + "' is not a number");
      t.columns[c++].push_back(v);
    }
    if (c != t.columns.size()) malformed("dat row has fewer fields than the header");
  }
  return t;
}

}  // namespace lraaa
