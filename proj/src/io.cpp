#include "tenrank/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace tenrank {

namespace {

static_assert(std::endian::native == std::endian::little,
              "TFMS I/O assumes a little-endian host");

constexpr char kMagic[4] = {'T', 'F', 'M', 'S'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t read_u32(std::istream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw input_error("truncated TFMS header");
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    fields.push_back(cur);
    for (std::string& f : fields) {
        const auto a = f.find_first_not_of(" \t");
        const auto b = f.find_last_not_of(" \t");
        f = a == std::string::npos ? std::string{} : f.substr(a, b - a + 1);
    }
    return fields;
}

std::int64_t parse_int(const std::string& s, const std::string& what) {
    std::int64_t v = 0;
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || p != end)
        throw input_error("could not parse " + what + " from '" + s + "'");
    return v;
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw input_error("could not parse " + what + " from '" + s + "'");
    }
}

std::string index_string(std::int64_t t, const std::vector<std::int64_t>& idx) {
    std::ostringstream os;
    os << "(t=" << t;
    for (std::int64_t i : idx) os << ", " << i;
    os << ")";
    return os.str();
}

TensorSeries ingest_long(const std::vector<std::string>& lines) {
    const auto header = split_csv_line(lines.front());
    if (header.size() < 3 || header.front() != "t" || header.back() != "value")
        throw input_error("long-form CSV needs header 't,i1,...,iK,value'");
    const int K = static_cast<int>(header.size()) - 2;

    struct Cell {
        std::int64_t t;
        std::vector<std::int64_t> idx;
        double value;
    };
    std::vector<Cell> cells;
    std::int64_t t_max = 0;
    std::vector<std::int64_t> dims(static_cast<std::size_t>(K), 0);
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const auto f = split_csv_line(lines[li]);
        if (f.size() == 1 && f[0].empty()) continue;
        if (static_cast<int>(f.size()) != K + 2)
            throw input_error("ragged CSV row " + std::to_string(li + 1) + ": expected " +
                              std::to_string(K + 2) + " fields, got " + std::to_string(f.size()));
        Cell c;
        c.t = parse_int(f[0], "time index");
        if (c.t < 1) throw input_error("time indices must be 1-based");
        for (int k = 0; k < K; ++k) {
            std::int64_t i = parse_int(f[static_cast<std::size_t>(k) + 1], "coordinate");
            if (i < 1) throw input_error("coordinates must be 1-based");
            c.idx.push_back(i);
            dims[static_cast<std::size_t>(k)] = std::max(dims[static_cast<std::size_t>(k)], i);
        }
        c.value = parse_double(f.back(), "value");
        t_max = std::max(t_max, c.t);
        cells.push_back(std::move(c));
    }
    if (cells.empty()) throw input_error("CSV contains no data rows");

    std::int64_t cell_count = 1;
    for (std::int64_t d : dims) cell_count *= d;

    std::vector<Tensor> obs(static_cast<std::size_t>(t_max), Tensor(dims));
    std::vector<std::vector<bool>> seen(static_cast<std::size_t>(t_max),
                                        std::vector<bool>(static_cast<std::size_t>(cell_count), false));
    for (const Cell& c : cells) {
        std::vector<std::int64_t> zero_based(c.idx);
        for (auto& v : zero_based) --v;
        Tensor& x = obs[static_cast<std::size_t>(c.t - 1)];
        const std::int64_t flat = x.flat_index(zero_based);
        auto mark = seen[static_cast<std::size_t>(c.t - 1)][static_cast<std::size_t>(flat)];
        if (mark) throw input_error("duplicate CSV cell at " + index_string(c.t, c.idx));
        mark = true;
        x[flat] = c.value;
    }
    for (std::int64_t t = 0; t < t_max; ++t)
        for (std::int64_t flat = 0; flat < cell_count; ++flat)
            if (!seen[static_cast<std::size_t>(t)][static_cast<std::size_t>(flat)]) {
                std::vector<std::int64_t> idx(dims.size());
                std::int64_t rem = flat;
                for (std::size_t k = 0; k < dims.size(); ++k) {
                    idx[k] = rem % dims[k] + 1;
                    rem /= dims[k];
                }
                throw input_error("missing CSV cell at " + index_string(t + 1, idx));
            }
    return TensorSeries(std::move(obs));
}

TensorSeries ingest_wide(const std::vector<std::string>& lines) {
    const std::string& sidecar = lines.front();
    const auto pos = sidecar.find("dims:");
    if (sidecar.empty() || sidecar[0] != '#' || pos == std::string::npos)
        throw input_error("wide-form CSV needs a leading sidecar line '# dims: d1,d2,...'");
    std::vector<std::int64_t> dims;
    for (const std::string& f : split_csv_line(sidecar.substr(pos + 5)))
        dims.push_back(parse_int(f, "dimension"));
    std::int64_t cell_count = 1;
    for (std::int64_t d : dims) {
        if (d < 1) throw input_error("dims in the sidecar line must be >= 1");
        cell_count *= d;
    }
    if (lines.size() < 2) throw input_error("wide-form CSV is missing its header row");
    const auto header = split_csv_line(lines[1]);
    if (header.empty() || header.front() != "t" ||
        static_cast<std::int64_t>(header.size()) != cell_count + 1)
        throw input_error("wide-form CSV header must be 't,v_1,...,v_" + std::to_string(cell_count) + "'");

    std::map<std::int64_t, Tensor> rows;
    for (std::size_t li = 2; li < lines.size(); ++li) {
        const auto f = split_csv_line(lines[li]);
        if (f.size() == 1 && f[0].empty()) continue;
        if (static_cast<std::int64_t>(f.size()) != cell_count + 1)
            throw input_error("ragged CSV row " + std::to_string(li + 1));
        const std::int64_t t = parse_int(f[0], "time index");
        if (t < 1) throw input_error("time indices must be 1-based");
        if (rows.count(t)) throw input_error("duplicate CSV row for t=" + std::to_string(t));
        std::vector<double> data;
        data.reserve(static_cast<std::size_t>(cell_count));
        for (std::int64_t i = 0; i < cell_count; ++i)
            data.push_back(parse_double(f[static_cast<std::size_t>(i) + 1], "value"));
        rows.emplace(t, Tensor(dims, std::move(data)));
    }
    if (rows.empty()) throw input_error("CSV contains no data rows");
    const std::int64_t t_max = rows.rbegin()->first;
    std::vector<Tensor> obs;
    for (std::int64_t t = 1; t <= t_max; ++t) {
        auto it = rows.find(t);
        if (it == rows.end()) throw input_error("missing CSV row for t=" + std::to_string(t));
        obs.push_back(std::move(it->second));
    }
    return TensorSeries(std::move(obs));
}

}  // namespace

void write_tfms(std::ostream& out, const TensorSeries& series) {
    out.write(kMagic, 4);
    write_u32(out, kVersion);
    write_u32(out, static_cast<std::uint32_t>(series.order()));
    write_u32(out, static_cast<std::uint32_t>(series.length()));
    for (std::int64_t d : series.dims()) write_u32(out, static_cast<std::uint32_t>(d));
    for (std::int64_t t = 0; t < series.length(); ++t) {
        const Tensor& x = series.obs(t);
        out.write(reinterpret_cast<const char*>(x.data()),
                  static_cast<std::streamsize>(x.size() * sizeof(double)));
    }
    if (!out) throw input_error("failed to write TFMS stream");
}

void write_tfms(const std::string& path, const TensorSeries& series) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw input_error("cannot open '" + path + "' for writing");
    write_tfms(f, series);
}

TensorSeries read_tfms(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw input_error("not a TFMS file (bad magic bytes)");
    const std::uint32_t version = read_u32(in);
    if (version != kVersion)
        throw input_error("unsupported TFMS version " + std::to_string(version));
    const std::uint32_t K = read_u32(in);
    const std::uint32_t T = read_u32(in);
    if (K < 1 || K > 8) throw input_error("TFMS order out of range");
    std::vector<std::int64_t> dims;
    std::int64_t n = 1;
    for (std::uint32_t k = 0; k < K; ++k) {
        dims.push_back(read_u32(in));
        n *= dims.back();
    }
    std::vector<Tensor> obs;
    obs.reserve(T);
    for (std::uint32_t t = 0; t < T; ++t) {
        std::vector<double> data(static_cast<std::size_t>(n));
        in.read(reinterpret_cast<char*>(data.data()),
                static_cast<std::streamsize>(n * sizeof(double)));
        if (!in) throw input_error("truncated TFMS payload at observation " + std::to_string(t));
        obs.emplace_back(dims, std::move(data));
    }
    return TensorSeries(std::move(obs));
}

TensorSeries read_tfms(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw input_error("cannot open '" + path + "'");
    return read_tfms(f);
}

TensorSeries ingest_csv_stream(std::istream& in, CsvLayout layout) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    if (lines.empty()) throw input_error("empty CSV input");

    if (layout == CsvLayout::autodetect)
        layout = lines.front().rfind('#', 0) == 0 ? CsvLayout::wide_form : CsvLayout::long_form;
    return layout == CsvLayout::long_form ? ingest_long(lines) : ingest_wide(lines);
}

TensorSeries ingest_csv(const std::string& path, CsvLayout layout) {
    std::ifstream f(path);
    if (!f) throw input_error("cannot open '" + path + "'");
    return ingest_csv_stream(f, layout);
}

void write_csv(std::ostream& out, const TensorSeries& series) {
    const int K = series.order();
    out << "t";
    for (int k = 1; k <= K; ++k) out << ",i" << k;
    out << ",value\n";
    std::vector<std::int64_t> idx(static_cast<std::size_t>(K), 0);
    for (std::int64_t t = 0; t < series.length(); ++t) {
        const Tensor& x = series.obs(t);
        std::fill(idx.begin(), idx.end(), 0);
        for (std::int64_t flat = 0; flat < x.size(); ++flat) {
            out << (t + 1);
            for (int k = 0; k < K; ++k) out << ',' << (idx[static_cast<std::size_t>(k)] + 1);
            out << ',' << x[flat] << '\n';
            for (int k = 0; k < K; ++k) {
                if (++idx[static_cast<std::size_t>(k)] < series.dims()[static_cast<std::size_t>(k)]) break;
                idx[static_cast<std::size_t>(k)] = 0;
            }
        }
    }
}

void write_csv(const std::string& path, const TensorSeries& series) {
    std::ofstream f(path);
    if (!f) throw input_error("cannot open '" + path + "' for writing");
    write_csv(f, series);
    if (!f) throw input_error("failed to write CSV to '" + path + "'");
}

}  // namespace tenrank
