#include "ronmf/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

namespace ronmf {

namespace {

constexpr char kMagic[4] = {'R', 'O', 'N', 'M'};

std::uint32_t read_u32_le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

void write_u32_le(std::ostream& out, std::uint32_t v) {
  const unsigned char bytes[4] = {
      static_cast<unsigned char>(v & 0xff), static_cast<unsigned char>((v >> 8) & 0xff),
      static_cast<unsigned char>((v >> 16) & 0xff), static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

DataMatrix load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  bool saw_labels = false;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream cells(line);
    std::string cell;
    std::size_t col = 0;
    std::vector<double> row;
    bool label_row = false;
    while (std::getline(cells, cell, ',')) {
      ++col;
      if (col == 1 && cell == "labels") {
        label_row = true;
        continue;
      }
      std::size_t consumed = 0;
      double value = 0.0;
      try {
        value = std::stod(cell, &consumed);
      } catch (const std::exception&) {
        throw DataError(path.string() + ": line " + std::to_string(line_no) + ", cell " +
                        std::to_string(col) + ": not a number: '" + cell + "'");
      }
      if (consumed != cell.size()) {
        throw DataError(path.string() + ": line " + std::to_string(line_no) + ", cell " +
                        std::to_string(col) + ": trailing garbage in '" + cell + "'");
      }
      if (label_row) {
        labels.push_back(static_cast<int>(value));
      } else {
        if (!std::isfinite(value)) {
          throw DataError(path.string() + ": line " + std::to_string(line_no) + ", cell " +
                          std::to_string(col) + ": non-finite value");
        }
        if (value < 0.0) {
          throw DataError(path.string() + ": line " + std::to_string(line_no) + ", cell " +
                          std::to_string(col) + ": negative entry " + cell);
        }
        row.push_back(value);
      }
    }
    if (label_row) {
      saw_labels = true;
      break;  // labels terminate the file
    }
    if (saw_labels) throw DataError(path.string() + ": data after the labels row");
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw DataError(path.string() + ": line " + std::to_string(line_no) + ": expected " +
                      std::to_string(rows.front().size()) + " cells, got " +
                      std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError(path.string() + ": no data rows");

  DataMatrix data;
  const auto d = static_cast<Eigen::Index>(rows.size());
  const auto n = static_cast<Eigen::Index>(rows.front().size());
  data.values.resize(d, n);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      data.values(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  if (saw_labels) {
    if (static_cast<Eigen::Index>(labels.size()) != n) {
      throw DataError(path.string() + ": labels row has " + std::to_string(labels.size()) +
                      " entries, expected " + std::to_string(n));
    }
    data.labels = std::move(labels);
    int max_label = -1;
    for (int y : data.labels) max_label = std::max(max_label, y);
    data.num_classes = max_label + 1;
  }
  return data;
}

DataMatrix load_rawf64(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());

  unsigned char header[16];
  if (!in.read(reinterpret_cast<char*>(header), 16)) {
    throw DataError(path.string() + ": truncated header (byte 0)");
  }
  if (std::memcmp(header, kMagic, 4) != 0) {
    throw DataError(path.string() + ": bad magic at byte 0, expected \"RONM\"");
  }
  const std::uint32_t d = read_u32_le(header + 4);
  const std::uint32_t n = read_u32_le(header + 8);
  const std::uint32_t has_labels = read_u32_le(header + 12);
  if (d == 0 || n == 0) throw DataError(path.string() + ": zero dimension in header");
  if (has_labels > 1) {
    throw DataError(path.string() + ": labels flag at byte 12 must be 0 or 1");
  }

  DataMatrix data;
  data.values.resize(d, n);
  const std::streamsize payload =
      static_cast<std::streamsize>(sizeof(double)) * static_cast<std::streamsize>(d) * n;
  if (!in.read(reinterpret_cast<char*>(data.values.data()), payload)) {
    throw DataError(path.string() + ": truncated payload at byte " +
                    std::to_string(16 + in.gcount()));
  }
  for (Eigen::Index j = 0; j < data.values.cols(); ++j) {
    for (Eigen::Index i = 0; i < data.values.rows(); ++i) {
      const double x = data.values(i, j);
      if (!std::isfinite(x)) {
        throw DataError(path.string() + ": non-finite entry at (" + std::to_string(i) + ", " +
                        std::to_string(j) + ")");
      }
      if (x < 0.0) {
        throw DataError(path.string() + ": negative entry at (" + std::to_string(i) + ", " +
                        std::to_string(j) + ")");
      }
    }
  }
  if (has_labels == 1) {
    std::vector<std::int32_t> raw(n);
    if (!in.read(reinterpret_cast<char*>(raw.data()),
                 static_cast<std::streamsize>(sizeof(std::int32_t)) * n)) {
      throw DataError(path.string() + ": truncated label block");
    }
    data.labels.assign(raw.begin(), raw.end());
    int max_label = -1;
    for (int y : data.labels) max_label = std::max(max_label, y);
    data.num_classes = max_label + 1;
  }
  return data;
}

}  // namespace

MatrixFormat matrix_format_from_string(const std::string& name) {
  if (name == "csv") return MatrixFormat::Csv;
  if (name == "rawf64" || name == "raw") return MatrixFormat::RawF64;
  throw DataError("unknown matrix format: " + name);
}

MatrixFormat matrix_format_from_path(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? MatrixFormat::Csv : MatrixFormat::RawF64;
}

DataMatrix load_matrix(const std::filesystem::path& path, MatrixFormat format) {
  return format == MatrixFormat::Csv ? load_csv(path) : load_rawf64(path);
}

void save_matrix(const DataMatrix& data, const std::filesystem::path& path, MatrixFormat format) {
  if (format == MatrixFormat::Csv) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out.precision(17);
    for (Eigen::Index i = 0; i < data.values.rows(); ++i) {
      for (Eigen::Index j = 0; j < data.values.cols(); ++j) {
        if (j > 0) out << ',';
        out << data.values(i, j);
      }
      out << '\n';
    }
    if (data.has_labels()) {
      out << "labels";
      for (int y : data.labels) out << ',' << y;
      out << '\n';
    }
    if (!out) throw DataError("write failed: " + path.string());
    return;
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(kMagic, 4);
  write_u32_le(out, static_cast<std::uint32_t>(data.values.rows()));
  write_u32_le(out, static_cast<std::uint32_t>(data.values.cols()));
  write_u32_le(out, data.has_labels() ? 1u : 0u);
  out.write(reinterpret_cast<const char*>(data.values.data()),
            static_cast<std::streamsize>(sizeof(double)) * data.values.size());
  if (data.has_labels()) {
    std::vector<std::int32_t> raw(data.labels.begin(), data.labels.end());
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(sizeof(std::int32_t)) * raw.size());
  }
  if (!out) throw DataError("write failed: " + path.string());
}

DataMatrix generate_synthetic(int classes, int per_class, int dim, double separation,
                              std::uint64_t seed) {
  if (classes < 1 || per_class < 1 || dim < 1) {
    throw ContractViolation("generate_synthetic: classes, per_class and dim must be positive");
  }
  if (separation < 0.0) throw ContractViolation("generate_synthetic: separation must be >= 0");

  const int n = classes * per_class;
  const int block = std::max(dim / classes, 1);

  DataMatrix data;
  data.values.resize(dim, n);
  data.labels.resize(static_cast<std::size_t>(n));
  data.num_classes = classes;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int j = 0; j < n; ++j) {
    const int cls = j / per_class;
    const int lo = std::min(cls * block, dim - 1);
    const int hi = std::min(lo + block, dim);
    for (int i = 0; i < dim; ++i) {
      const double mean = (i >= lo && i < hi) ? separation : 0.0;
      data.values(i, j) = std::max(mean + gauss(rng), 0.0);
    }
    data.labels[static_cast<std::size_t>(j)] = cls;
  }
  return data;
}

}  // namespace ronmf
