#include "fsl/io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fsl/error.hpp"

namespace fsl {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

bool parse_real(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

[[noreturn]] void bad_complex(const std::string& text) {
  throw Error(ErrorCode::InvalidArgument, "cannot parse complex number '" + text + "'");
}

}  // namespace

cplx parse_complex(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (ch != ' ' && ch != '\t') s.push_back(ch);
  if (s.empty()) bad_complex(text);
  if (s.back() != 'i' && s.back() != 'j') {
    double re;
    if (!parse_real(s, re)) bad_complex(text);
    return {re, 0.0};
  }
  s.pop_back();
  // Split at the last sign that does not belong to an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  const std::string re_part = split == std::string::npos ? "" : s.substr(0, split);
  std::string im_part = split == std::string::npos ? s : s.substr(split);
  if (im_part.empty() || im_part == "+") im_part = "1";
  if (im_part == "-") im_part = "-1";
  double re = 0.0, im;
  if (!re_part.empty() && !parse_real(re_part, re)) bad_complex(text);
  if (!parse_real(im_part, im)) bad_complex(text);
  return {re, im};
}

std::string format_complex(cplx z) {
  std::string im = format_double(z.imag());
  if (im[0] != '-') im = "+" + im;
  return format_double(z.real()) + im + "i";
}

namespace {

void dump_into(std::ostringstream& os, const Json& j, int indent, int level) {
  const std::string pad = indent > 0 ? std::string(std::size_t(indent * (level + 1)), ' ') : "";
  const std::string close = indent > 0 ? std::string(std::size_t(indent * level), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{" << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << "," << nl;
        first = false;
        os << pad << Json(it.key()).dump() << (indent > 0 ? ": " : ":");
        dump_into(os, it.value(), indent, level + 1);
      }
      os << nl << close << "}";
      return;
    }
    case Json::value_t::array: {
      // Short arrays of scalars stay on one line.
      bool flat = j.size() <= 4;
      for (const auto& e : j) flat = flat && !e.is_structured();
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[";
      bool first = true;
      for (const auto& e : j) {
        if (!first) os << (flat ? ", " : ",");
        if (!flat) os << nl << pad;
        first = false;
        dump_into(os, e, indent, level + 1);
      }
      if (!flat) os << nl << close;
      os << "]";
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      os << (std::isfinite(x) ? format_double(x) : "null");
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
  std::ostringstream os;
  dump_into(os, j, indent, 0);
  os << "\n";
  return os.str();
}

Json complex_to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::MalformedFile, what); }

const Json& field(const Json& j, const std::string& name) {
  if (!j.is_object()) malformed("expected a JSON object");
  auto it = j.find(name);
  if (it == j.end()) malformed("missing field '" + name + "'");
  return *it;
}

double number(const Json& j, const std::string& name) {
  if (!j.is_number()) malformed("field '" + name + "' must be a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& name) {
  if (!j.is_number_integer()) malformed("field '" + name + "' must be an integer");
  return j.get<int>();
}

void warn_unknown(const Json& j, std::initializer_list<const char*> known,
                  std::vector<std::string>* warnings) {
  if (!warnings || !j.is_object()) return;
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool found = false;
    for (const char* k : known) found = found || it.key() == k;
    if (!found) warnings->push_back("ignoring unknown field '" + it.key() + "'");
  }
}

}  // namespace

cplx complex_from_json(const Json& j, const std::string& name) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    malformed("field '" + name + "' must be a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json window_to_json(const Window& w) {
  return Json{{"re_min", w.re_min}, {"re_max", w.re_max}, {"im_min", w.im_min}, {"im_max", w.im_max}};
}

Window window_from_json(const Json& j) {
  Window w;
  w.re_min = number(field(j, "re_min"), "re_min");
  w.re_max = number(field(j, "re_max"), "re_max");
  w.im_min = number(field(j, "im_min"), "im_min");
  w.im_max = number(field(j, "im_max"), "im_max");
  return w;
}

Json to_json(const MisiurewiczPoint& m) {
  return Json{{"c", complex_to_json(m.c)},
              {"l", m.preperiod},
              {"p", m.period},
              {"x_c", complex_to_json(m.x_c)},
              {"rho", complex_to_json(m.multiplier)},
              {"scale_derivative", complex_to_json(m.scale_derivative)},
              {"transversality", complex_to_json(m.transversality)},
              {"residual", m.residual}};
}

MisiurewiczPoint misiurewicz_from_json(const Json& j, std::vector<std::string>* warnings) {
  warn_unknown(j, {"c", "l", "p", "x_c", "rho", "scale_derivative", "transversality", "residual"},
               warnings);
  MisiurewiczPoint m;
  m.c = complex_from_json(field(j, "c"), "c");
  m.preperiod = integer(field(j, "l"), "l");
  m.period = integer(field(j, "p"), "p");
  m.x_c = complex_from_json(field(j, "x_c"), "x_c");
  m.multiplier = complex_from_json(field(j, "rho"), "rho");
  m.scale_derivative = complex_from_json(field(j, "scale_derivative"), "scale_derivative");
  if (j.contains("transversality"))
    m.transversality = complex_from_json(j["transversality"], "transversality");
  else
    m.transversality = transversality(m.c, m.preperiod, m.period);
  m.residual = number(field(j, "residual"), "residual");
  return m;
}

Json to_json(const Polynomial& p) {
  Json coeffs = Json::array();
  for (cplx a : p.coeffs()) coeffs.push_back(complex_to_json(a));
  return Json{{"coefficients", coeffs}};
}

Polynomial polynomial_from_json(const Json& j, std::vector<std::string>* warnings) {
  warn_unknown(j, {"coefficients"}, warnings);
  const Json& arr = field(j, "coefficients");
  if (!arr.is_array()) malformed("field 'coefficients' must be an array");
  std::vector<cplx> c;
  for (const auto& e : arr) c.push_back(complex_from_json(e, "coefficients"));
  return Polynomial(c);
}

Json to_json(const Lamination& L) {
  Json leaves = Json::array();
  for (const auto& l : L.leaves) leaves.push_back(Json::array({l.a.str(), l.b.str()}));
  Json frontier = Json::array();
  for (bool f : L.frontier) frontier.push_back(f);
  return Json{{"degree", L.degree}, {"depth", L.depth}, {"leaves", leaves}, {"frontier", frontier}};
}

Lamination lamination_from_json(const Json& j, std::vector<std::string>* warnings) {
  warn_unknown(j, {"degree", "depth", "leaves", "frontier"}, warnings);
  Lamination L;
  L.degree = integer(field(j, "degree"), "degree");
  L.depth = integer(field(j, "depth"), "depth");
  const Json& leaves = field(j, "leaves");
  if (!leaves.is_array()) malformed("field 'leaves' must be an array");
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    const Json& e = leaves[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
      malformed("leaves[" + std::to_string(i) + "] must be a pair of \"p/q\" strings");
    try {
      L.leaves.emplace_back(Angle::parse(e[0].get<std::string>()),
                            Angle::parse(e[1].get<std::string>()));
    } catch (const Error& err) {
      malformed("leaves[" + std::to_string(i) + "]: " + err.what());
    }
  }
  if (j.contains("frontier")) {
    const Json& f = j["frontier"];
    if (!f.is_array() || f.size() != L.leaves.size())
      malformed("field 'frontier' must hold one boolean per leaf");
    for (const auto& e : f) L.frontier.push_back(e.get<bool>());
  } else {
    L.frontier.assign(L.leaves.size(), false);
  }
  return L;
}

std::string cloud_to_csv(const PointCloud& cloud) {
  std::string out = "re,im\n";
  for (cplx z : cloud.points) out += format_double(z.real()) + "," + format_double(z.imag()) + "\n";
  return out;
}

PointCloud cloud_from_csv(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  const auto where = [&] { return source + ":" + std::to_string(lineno) + ": "; };
  PointCloud cloud;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header) {
      if (line != "re,im") malformed(where() + "expected header 're,im'");
      header = true;
      continue;
    }
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
      malformed(where() + "expected two comma-separated fields");
    double re, im;
    if (!parse_real(line.substr(0, comma), re)) malformed(where() + "field 're' is not a number");
    if (!parse_real(line.substr(comma + 1), im)) malformed(where() + "field 'im' is not a number");
    cloud.points.emplace_back(re, im);
  }
  if (!header) malformed(source + ": empty file, expected header 're,im'");
  cloud.meta = source;
  return cloud;
}

void save_cloud_csv(const std::string& path, const PointCloud& cloud) {
  write_text_file(path, cloud_to_csv(cloud));
}

PointCloud load_cloud_csv(const std::string& path) { return cloud_from_csv(read_text_file(path), path); }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error(ErrorCode::InvalidArgument, "failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MalformedFile, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::string& path) {
  try {
    return Json::parse(read_text_file(path));
  } catch (const Json::parse_error& e) {
    malformed(path + ": " + e.what());
  }
}

namespace {

struct PngFile {
  std::FILE* f = nullptr;
  ~PngFile() {
    if (f) std::fclose(f);
  }
};

}  // namespace

void write_png(const std::string& path, const Image& img,
               const std::map<std::string, std::string>& text) {
  if (img.width <= 0 || img.height <= 0 ||
      img.rgb.size() != std::size_t(img.width) * std::size_t(img.height) * 3)
    throw Error(ErrorCode::InvalidArgument, "image buffer does not match its size");
  PngFile file{std::fopen(path.c_str(), "wb")};
  if (!file.f) throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "' for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::InvalidArgument, "libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::InvalidArgument, "libpng failed writing '" + path + "'");
  }
  png_init_io(png, file.f);
  png_set_IHDR(png, info, png_uint_32(img.width), png_uint_32(img.height), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  std::vector<png_text> chunks;
  for (const auto& [k, v] : text) {
    png_text t{};
    t.compression = PNG_TEXT_COMPRESSION_NONE;
    t.key = const_cast<char*>(k.c_str());
    t.text = const_cast<char*>(v.c_str());
    t.text_length = v.size();
    chunks.push_back(t);
  }
  if (!chunks.empty()) png_set_text(png, info, chunks.data(), int(chunks.size()));
  png_write_info(png, info);
  for (int y = 0; y < img.height; ++y)
    png_write_row(png, const_cast<png_bytep>(&img.rgb[std::size_t(y) * std::size_t(img.width) * 3]));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

PngInfo read_png_info(const std::string& path) {
  PngFile file{std::fopen(path.c_str(), "rb")};
  if (!file.f) throw Error(ErrorCode::MalformedFile, "cannot open '" + path + "'");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::MalformedFile, "libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::MalformedFile, "'" + path + "' is not a readable PNG");
  }
  png_init_io(png, file.f);
  png_read_info(png, info);
  PngInfo out;
  out.width = int(png_get_image_width(png, info));
  out.height = int(png_get_image_height(png, info));
  png_textp chunks = nullptr;
  int n = 0;
  png_get_text(png, info, &chunks, &n);
  for (int i = 0; i < n; ++i) out.text[chunks[i].key] = chunks[i].text;
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

}  // namespace fsl
