#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "qshift/image.hpp"

namespace qshift {

enum class ParseErrorKind {
  bad_magic,
  malformed_header,
  unsupported_maxval,
  truncated_payload,
  malformed_csv,
};

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ParseErrorKind kind() const { return kind_; }

 private:
  ParseErrorKind kind_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Binary P6 with maxval 255.
RgbImage read_ppm(std::istream& in);
RgbImage load_ppm(const std::filesystem::path& path);
void write_ppm(std::ostream& out, const RgbImage& image);
void save_ppm(const RgbImage& image, const std::filesystem::path& path);

enum class LabelFormat { csv, pgm16 };

LabelFormat parse_label_format(const std::string& name);

/// csv: one line per image row, comma separated, LF endings.
/// pgm16: binary P5, maxval 65535, big-endian samples; requires num_labels <= 65535.
void write_labels(std::ostream& out, const LabelMap& labels, LabelFormat format);
void save_labels(const LabelMap& labels, const std::filesystem::path& path, LabelFormat format);
LabelMap read_labels_csv(std::istream& in);

/// Row-major CSV, 17 significant digits.
void write_field_csv(std::ostream& out, const DensityField& field);
DensityField read_field_csv(std::istream& in);

/// Raw CIELAB dump: one line per pixel, "i,j,L,a,b".
void write_image_csv(std::ostream& out, const Image& image);

}  // namespace qshift
