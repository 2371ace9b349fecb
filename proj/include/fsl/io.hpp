#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "fsl/cloud.hpp"
#include "fsl/dynamics.hpp"
#include "fsl/lamination.hpp"
#include "fsl/misiurewicz.hpp"
#include "fsl/poly.hpp"

namespace fsl {

using Json = nlohmann::json;

/// "%.17g": enough digits for an exact double round trip.
std::string format_double(double x);

/// "a+bi" / "a-bi" with optional spaces; also "a", "bi", "i", "-i".
/// Throws InvalidArgument.
cplx parse_complex(const std::string& text);
std::string format_complex(cplx z);

/// JSON text with every number written by format_double.
std::string dump_json(const Json& j, int indent = 2);

Json complex_to_json(cplx z);
cplx complex_from_json(const Json& j, const std::string& field);

Json window_to_json(const Window& w);
Window window_from_json(const Json& j);

Json to_json(const MisiurewiczPoint& m);
Json to_json(const Polynomial& p);
Json to_json(const Lamination& L);

/// Readers accept unknown fields and report them in `warnings`.
/// Missing or mistyped fields throw MalformedFile naming the field.
MisiurewiczPoint misiurewicz_from_json(const Json& j, std::vector<std::string>* warnings = nullptr);
Polynomial polynomial_from_json(const Json& j, std::vector<std::string>* warnings = nullptr);
Lamination lamination_from_json(const Json& j, std::vector<std::string>* warnings = nullptr);

/// CSV with header "re,im". Throws MalformedFile with the offending line.
void save_cloud_csv(const std::string& path, const PointCloud& cloud);
PointCloud load_cloud_csv(const std::string& path);
std::string cloud_to_csv(const PointCloud& cloud);
PointCloud cloud_from_csv(const std::string& text, const std::string& source = "<string>");

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

/// RGB PNG with one tEXt chunk per metadata entry.
void write_png(const std::string& path, const Image& img,
               const std::map<std::string, std::string>& text = {});
/// The tEXt entries of a PNG file, plus its size.
struct PngInfo {
  int width = 0;
  int height = 0;
  std::map<std::string, std::string> text;
};
PngInfo read_png_info(const std::string& path);

}  // namespace fsl
