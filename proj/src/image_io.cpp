#include "qshift/image_io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace qshift {

namespace {

// Reads one whitespace-delimited header token, skipping '#' comments.
std::string header_token(std::istream& in) {
  std::string token;
  int c;
  while ((c = in.peek()) != EOF) {
    if (c == '#') {
      in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
    } else if (std::isspace(c)) {
      in.get();
    } else {
      break;
    }
  }
  while ((c = in.peek()) != EOF && !std::isspace(c) && c != '#') token.push_back(static_cast<char>(in.get()));
  return token;
}

int header_int(std::istream& in, const char* what) {
  const std::string tok = header_token(in);
  int value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError(ParseErrorKind::malformed_header, std::string("PPM header: bad ") + what + " '" + tok + "'");
  return value;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace

RgbImage read_ppm(std::istream& in) {
  const std::string magic = header_token(in);
  if (magic != "P6") throw ParseError(ParseErrorKind::bad_magic, "expected binary PPM magic P6, got '" + magic + "'");
  const int width = header_int(in, "width");
  const int height = header_int(in, "height");
  const int maxval = header_int(in, "maxval");
  if (width < 1 || height < 1) throw ParseError(ParseErrorKind::malformed_header, "PPM dimensions must be positive");
  if (maxval != 255)
    throw ParseError(ParseErrorKind::unsupported_maxval, "only maxval 255 is supported, got " + std::to_string(maxval));
  if (!std::isspace(in.get())) throw ParseError(ParseErrorKind::malformed_header, "missing whitespace after maxval");

  Shape shape{height, width};
  std::vector<std::uint8_t> bytes(3 * shape.size());
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (static_cast<std::size_t>(in.gcount()) != bytes.size())
    throw ParseError(ParseErrorKind::truncated_payload, "PPM payload truncated: expected " +
                                                            std::to_string(bytes.size()) + " bytes, got " +
                                                            std::to_string(in.gcount()));
  return RgbImage(shape, std::move(bytes));
}

RgbImage load_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read_ppm(in);
}

void write_ppm(std::ostream& out, const RgbImage& image) {
  out << "P6\n" << image.width() << ' ' << image.height() << "\n255\n";
  const auto bytes = image.bytes();
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void save_ppm(const RgbImage& image, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_ppm(out, image);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

LabelFormat parse_label_format(const std::string& name) {
  if (name == "csv") return LabelFormat::csv;
  if (name == "pgm16") return LabelFormat::pgm16;
  throw std::invalid_argument("unknown label format '" + name + "' (expected csv or pgm16)");
}

void write_labels(std::ostream& out, const LabelMap& map, LabelFormat format) {
  const auto& labels = map.labels;
  if (format == LabelFormat::csv) {
    for (int i = 0; i < labels.height(); ++i) {
      for (int j = 0; j < labels.width(); ++j) {
        if (j) out << ',';
        out << labels(i, j);
      }
      out << '\n';
    }
    return;
  }
  if (map.num_labels > 65535)
    throw std::overflow_error("pgm16 holds at most 65535 labels, map has " + std::to_string(map.num_labels));
  out << "P5\n" << labels.width() << ' ' << labels.height() << "\n65535\n";
  for (std::int32_t label : labels.values()) {
    const char sample[2] = {static_cast<char>((label >> 8) & 0xff), static_cast<char>(label & 0xff)};
    out.write(sample, 2);
  }
}

void save_labels(const LabelMap& labels, const std::filesystem::path& path, LabelFormat format) {
  // Check the range before touching the filesystem.
  if (format == LabelFormat::pgm16 && labels.num_labels > 65535)
    throw std::overflow_error("pgm16 holds at most 65535 labels, map has " + std::to_string(labels.num_labels));
  auto out = open_out(path);
  write_labels(out, labels, format);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

LabelMap read_labels_csv(std::istream& in) {
  std::vector<std::int32_t> values;
  int width = -1;
  int height = 0;
  std::int32_t max_label = -1;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    int count = 0;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) {
      std::int32_t v = 0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc{} || ptr != cell.data() + cell.size() || v < 0)
        throw ParseError(ParseErrorKind::malformed_csv, "bad label '" + cell + "'");
      values.push_back(v);
      max_label = std::max(max_label, v);
      ++count;
    }
    if (width < 0) width = count;
    if (count != width) throw ParseError(ParseErrorKind::malformed_csv, "ragged label rows");
    ++height;
  }
  if (height == 0) throw ParseError(ParseErrorKind::malformed_csv, "empty label file");
  return LabelMap{Grid<std::int32_t>(Shape{height, width}, std::move(values)), max_label + 1};
}

void write_field_csv(std::ostream& out, const DensityField& field) {
  const auto old_precision = out.precision(17);
  for (int i = 0; i < field.height(); ++i) {
    for (int j = 0; j < field.width(); ++j) {
      if (j) out << ',';
      out << field(i, j);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

DensityField read_field_csv(std::istream& in) {
  std::vector<double> values;
  int width = -1;
  int height = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    int count = 0;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ParseError(ParseErrorKind::malformed_csv, "bad field value '" + cell + "'");
      }
      ++count;
    }
    if (width < 0) width = count;
    if (count != width) throw ParseError(ParseErrorKind::malformed_csv, "ragged field rows");
    ++height;
  }
  if (height == 0) throw ParseError(ParseErrorKind::malformed_csv, "empty field file");
  return DensityField(Shape{height, width}, std::move(values));
}

void write_image_csv(std::ostream& out, const Image& image) {
  const auto old_precision = out.precision(17);
  out << "i,j,L,a,b\n";
  for (int i = 0; i < image.height(); ++i)
    for (int j = 0; j < image.width(); ++j) {
      const Color c = image.pixel(i, j);
      out << i << ',' << j << ',' << c[0] << ',' << c[1] << ',' << c[2] << '\n';
    }
  out.precision(old_precision);
}

}  // namespace qshift
