#include "layoutforge/gdsii.hpp"

#include <cmath>
#include <cstring>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace layoutforge {

namespace {

// Record tag = (record type << 8) | data type.
constexpr std::uint16_t kHeader = 0x0002;
constexpr std::uint16_t kBgnLib = 0x0102;
constexpr std::uint16_t kLibName = 0x0206;
constexpr std::uint16_t kUnits = 0x0305;
constexpr std::uint16_t kEndLib = 0x0400;
constexpr std::uint16_t kBgnStr = 0x0502;
constexpr std::uint16_t kStrName = 0x0606;
constexpr std::uint16_t kEndStr = 0x0700;
constexpr std::uint16_t kBoundary = 0x0800;
constexpr std::uint16_t kLayer = 0x0D02;
constexpr std::uint16_t kDataType = 0x0E02;
constexpr std::uint16_t kXy = 0x1003;
constexpr std::uint16_t kEndEl = 0x1100;

constexpr std::int16_t kVersion = 600;
constexpr double kUserUnit = 1e-3;  // um per database unit
constexpr double kMeterUnit = 1e-9;

bool valid_gds_name(const std::string& name) {
  if (name.empty() || name.size() > 32) return false;
  for (char c : name) {
    const bool ok = (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '$';
    if (!ok) return false;
  }
  return true;
}

class RecordWriter {
 public:
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

  void record(std::uint16_t tag) { begin(tag); end(); }

  void record_i16(std::uint16_t tag, std::initializer_list<std::int16_t> values) {
    begin(tag);
    for (std::int16_t v : values) push_u16(static_cast<std::uint16_t>(v));
    end();
  }

  void record_i32(std::uint16_t tag, const std::vector<std::int32_t>& values) {
    begin(tag);
    for (std::int32_t v : values) push_u32(static_cast<std::uint32_t>(v));
    end();
  }

  void record_string(std::uint16_t tag, const std::string& s) {
    begin(tag);
    for (char c : s) bytes_.push_back(static_cast<std::uint8_t>(c));
    if (s.size() % 2 != 0) bytes_.push_back(0);
    end();
  }

  void record_real8(std::uint16_t tag, std::initializer_list<double> values) {
    begin(tag);
    for (double v : values) {
      const auto enc = encode_real8(v);
      bytes_.insert(bytes_.end(), enc.begin(), enc.end());
    }
    end();
  }

 private:
  void begin(std::uint16_t tag) {
    start_ = bytes_.size();
    push_u16(0);  // patched in end()
    push_u16(tag);
  }
  void end() {
    const std::size_t len = bytes_.size() - start_;
    bytes_[start_] = static_cast<std::uint8_t>(len >> 8);
    bytes_[start_ + 1] = static_cast<std::uint8_t>(len & 0xFF);
  }
  void push_u16(std::uint16_t v) {
    bytes_.push_back(static_cast<std::uint8_t>(v >> 8));
    bytes_.push_back(static_cast<std::uint8_t>(v & 0xFF));
  }
  void push_u32(std::uint32_t v) {
    bytes_.push_back(static_cast<std::uint8_t>(v >> 24));
    bytes_.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
    bytes_.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
    bytes_.push_back(static_cast<std::uint8_t>(v & 0xFF));
  }

  std::vector<std::uint8_t> bytes_;
  std::size_t start_ = 0;
};

std::int32_t to_i32(DbUnit v) {
  if (v < std::numeric_limits<std::int32_t>::min() ||
      v > std::numeric_limits<std::int32_t>::max()) {
    throw GdsError("coordinate does not fit a 32-bit stream record", 0);
  }
  return static_cast<std::int32_t>(v);
}

}  // namespace

GdsTimestamps GdsTimestamps::now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  localtime_r(&t, &tm);
  return {static_cast<std::int16_t>(tm.tm_year + 1900),
          static_cast<std::int16_t>(tm.tm_mon + 1),
          static_cast<std::int16_t>(tm.tm_mday),
          static_cast<std::int16_t>(tm.tm_hour),
          static_cast<std::int16_t>(tm.tm_min),
          static_cast<std::int16_t>(tm.tm_sec)};
}

std::array<std::uint8_t, 8> encode_real8(double value) {
  std::array<std::uint8_t, 8> out{};
  if (value == 0.0 || !std::isfinite(value)) return out;

  std::uint8_t sign = 0;
  if (value < 0) {
    sign = 0x80;
    value = -value;
  }
  int exponent = 64;
  while (value >= 1.0) {
    value /= 16.0;
    ++exponent;
  }
  while (value < 1.0 / 16.0) {
    value *= 16.0;
    --exponent;
  }
  std::uint64_t mantissa =
      static_cast<std::uint64_t>(std::llround(value * 72057594037927936.0));  // 2^56
  if (mantissa >= (1ull << 56)) {
    mantissa >>= 4;
    ++exponent;
  }
  if (exponent < 0 || exponent > 127) return out;  // underflow/overflow to zero

  out[0] = static_cast<std::uint8_t>(sign | exponent);
  for (int i = 0; i < 7; ++i) {
    out[7 - i] = static_cast<std::uint8_t>((mantissa >> (8 * i)) & 0xFF);
  }
  return out;
}

double decode_real8(const std::array<std::uint8_t, 8>& bytes) {
  const bool negative = (bytes[0] & 0x80) != 0;
  const int exponent = (bytes[0] & 0x7F) - 64;
  std::uint64_t mantissa = 0;
  for (int i = 1; i < 8; ++i) mantissa = (mantissa << 8) | bytes[i];
  double value = static_cast<double>(mantissa) / 72057594037927936.0;
  value *= std::pow(16.0, exponent);
  return negative ? -value : value;
}

std::vector<std::uint8_t> encode_gds(const GdsLibrary& lib) {
  if (!valid_gds_name(lib.name)) {
    throw GdsError("library name must be 1-32 chars of [A-Z0-9_$]: " + lib.name, 0);
  }
  RecordWriter w;
  const auto& ts = lib.stamp;
  const std::initializer_list<std::int16_t> stamp{ts.year,   ts.month,  ts.day,
                                                  ts.hour,   ts.minute, ts.second,
                                                  ts.year,   ts.month,  ts.day,
                                                  ts.hour,   ts.minute, ts.second};

  w.record_i16(kHeader, {kVersion});
  w.record_i16(kBgnLib, stamp);
  w.record_string(kLibName, lib.name);
  w.record_real8(kUnits, {kUserUnit, kMeterUnit});

  for (const Cell& cell : lib.cells) {
    if (!valid_gds_name(cell.name)) {
      throw GdsError("cell name must be 1-32 chars of [A-Z0-9_$]: " + cell.name, 0);
    }
    w.record_i16(kBgnStr, stamp);
    w.record_string(kStrName, cell.name);
    for (const Shape& s : cell.shapes) {
      w.record(kBoundary);
      w.record_i16(kLayer, {static_cast<std::int16_t>(s.layer)});
      w.record_i16(kDataType, {0});
      const Rect& r = s.rect;
      // Closed ring, counter-clockwise from the lower-left corner.
      w.record_i32(kXy, {to_i32(r.x_ll), to_i32(r.y_ll), to_i32(r.x_ur),
                         to_i32(r.y_ll), to_i32(r.x_ur), to_i32(r.y_ur),
                         to_i32(r.x_ll), to_i32(r.y_ur), to_i32(r.x_ll),
                         to_i32(r.y_ll)});
      w.record(kEndEl);
    }
    w.record(kEndStr);
  }
  w.record(kEndLib);
  return w.take();
}

namespace {

class RecordReader {
 public:
  RecordReader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}

  struct Record {
    std::uint16_t tag = 0;
    const std::uint8_t* payload = nullptr;
    std::size_t length = 0;  // payload bytes
    std::size_t offset = 0;  // record start in the stream
  };

  bool done() const { return pos_ >= size_; }
  std::size_t pos() const { return pos_; }

  Record next() {
    if (pos_ + 4 > size_) throw GdsError("truncated record header", pos_);
    const std::size_t total = (static_cast<std::size_t>(data_[pos_]) << 8) | data_[pos_ + 1];
    if (total < 4) throw GdsError("record length below header size", pos_);
    if (pos_ + total > size_) throw GdsError("truncated record payload", pos_);
    Record r;
    r.offset = pos_;
    r.tag = static_cast<std::uint16_t>((data_[pos_ + 2] << 8) | data_[pos_ + 3]);
    r.payload = data_ + pos_ + 4;
    r.length = total - 4;
    pos_ += total;
    return r;
  }

  Record expect(std::uint16_t tag, const char* what) {
    const std::size_t at = pos_;
    const Record r = next();
    if (r.tag != tag) {
      throw GdsError(std::string("expected ") + what, at);
    }
    return r;
  }

 private:
  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

std::int16_t read_i16(const std::uint8_t* p) {
  return static_cast<std::int16_t>((p[0] << 8) | p[1]);
}

std::int32_t read_i32(const std::uint8_t* p) {
  return static_cast<std::int32_t>((static_cast<std::uint32_t>(p[0]) << 24) |
                                   (static_cast<std::uint32_t>(p[1]) << 16) |
                                   (static_cast<std::uint32_t>(p[2]) << 8) |
                                   static_cast<std::uint32_t>(p[3]));
}

std::string read_name(const RecordReader::Record& r) {
  std::string s(reinterpret_cast<const char*>(r.payload), r.length);
  while (!s.empty() && s.back() == '\0') s.pop_back();
  return s;
}

GdsTimestamps read_stamp(const RecordReader::Record& r) {
  if (r.length < 12) throw GdsError("timestamp record too short", r.offset);
  return {read_i16(r.payload), read_i16(r.payload + 2), read_i16(r.payload + 4),
          read_i16(r.payload + 6), read_i16(r.payload + 8), read_i16(r.payload + 10)};
}

Rect rect_from_ring(const RecordReader::Record& xy) {
  if (xy.length != 40) throw GdsError("non-rectangular boundary", xy.offset);
  std::int32_t px[5], py[5];
  for (int i = 0; i < 5; ++i) {
    px[i] = read_i32(xy.payload + 8 * i);
    py[i] = read_i32(xy.payload + 8 * i + 4);
  }
  const Rect r{px[0], py[0], px[2], py[2]};
  const bool canonical = r.valid() && px[1] == r.x_ur && py[1] == r.y_ll &&
                         px[3] == r.x_ll && py[3] == r.y_ur && px[4] == px[0] &&
                         py[4] == py[0];
  if (!canonical) throw GdsError("non-rectangular boundary", xy.offset);
  return r;
}

Rect shape_bounds(const std::vector<Shape>& shapes) {
  if (shapes.empty()) return {};
  Rect b = shapes.front().rect;
  for (const Shape& s : shapes) {
    b.x_ll = std::min(b.x_ll, s.rect.x_ll);
    b.y_ll = std::min(b.y_ll, s.rect.y_ll);
    b.x_ur = std::max(b.x_ur, s.rect.x_ur);
    b.y_ur = std::max(b.y_ur, s.rect.y_ur);
  }
  return b;
}

}  // namespace

GdsLibrary decode_gds(const std::uint8_t* data, std::size_t size) {
  RecordReader reader(data, size);
  GdsLibrary lib;

  const auto header = reader.expect(kHeader, "HEADER");
  if (header.length < 2 || read_i16(header.payload) != kVersion) {
    throw GdsError("unsupported stream version", header.offset);
  }
  lib.stamp = read_stamp(reader.expect(kBgnLib, "BGNLIB"));
  lib.name = read_name(reader.expect(kLibName, "LIBNAME"));

  const auto units = reader.expect(kUnits, "UNITS");
  if (units.length != 16) throw GdsError("UNITS record malformed", units.offset);
  std::array<std::uint8_t, 8> u{}, m{};
  std::memcpy(u.data(), units.payload, 8);
  std::memcpy(m.data(), units.payload + 8, 8);
  const double uu = decode_real8(u);
  const double mu = decode_real8(m);
  if (std::abs(uu - kUserUnit) > 1e-12 || std::abs(mu - kMeterUnit) > 1e-18) {
    throw GdsError("unsupported units (expected 0.001 um/db and 1e-9 m)", units.offset);
  }

  for (;;) {
    const auto rec = reader.next();
    if (rec.tag == kEndLib) break;
    if (rec.tag != kBgnStr) throw GdsError("expected BGNSTR or ENDLIB", rec.offset);

    Cell cell;
    cell.name = read_name(reader.expect(kStrName, "STRNAME"));
    for (;;) {
      const auto el = reader.next();
      if (el.tag == kEndStr) break;
      if (el.tag != kBoundary) throw GdsError("expected BOUNDARY or ENDSTR", el.offset);

      const auto layer = reader.expect(kLayer, "LAYER");
      if (layer.length < 2) throw GdsError("LAYER record malformed", layer.offset);
      const auto dtype = reader.expect(kDataType, "DATATYPE");
      if (dtype.length < 2 || read_i16(dtype.payload) != 0) {
        throw GdsError("unsupported DATATYPE", dtype.offset);
      }
      const Rect r = rect_from_ring(reader.expect(kXy, "XY"));
      reader.expect(kEndEl, "ENDEL");
      cell.shapes.push_back({read_i16(layer.payload), r});
    }
    cell.bbox = shape_bounds(cell.shapes);
    lib.cells.push_back(std::move(cell));
  }

  if (!reader.done()) throw GdsError("trailing bytes after ENDLIB", reader.pos());
  return lib;
}

std::size_t write_gds(const GdsLibrary& lib, const std::filesystem::path& path) {
  const auto bytes = encode_gds(lib);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw GdsError("cannot open " + path.string() + " for writing", 0);
  os.write(reinterpret_cast<const char*>(bytes.data()),
           static_cast<std::streamsize>(bytes.size()));
  if (!os) throw GdsError("short write to " + path.string(), 0);
  return bytes.size();
}

GdsLibrary read_gds(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw GdsError("cannot open " + path.string(), 0);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)),
                                  std::istreambuf_iterator<char>());
  return decode_gds(bytes.data(), bytes.size());
}

void write_shapes_jsonl(std::ostream& os, const Cell& cell) {
  for (const Shape& s : cell.shapes) {
    os << "{\"layer\":" << s.layer << ",\"rect\":[" << s.rect.x_ll << ','
       << s.rect.y_ll << ',' << s.rect.x_ur << ',' << s.rect.y_ur << "]}\n";
  }
}

std::vector<Shape> read_shapes_jsonl(std::istream& is) {
  std::vector<Shape> shapes;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("layer") || !j.contains("rect") ||
        !j["rect"].is_array() || j["rect"].size() != 4) {
      throw GdsError("malformed shape line " + std::to_string(lineno), lineno);
    }
    const auto& r = j["rect"];
    shapes.push_back({j["layer"].get<int>(),
                      {r[0].get<DbUnit>(), r[1].get<DbUnit>(), r[2].get<DbUnit>(),
                       r[3].get<DbUnit>()}});
  }
  return shapes;
}

}  // namespace layoutforge
