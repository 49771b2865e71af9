#include "gfrob/io.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace gfrob::io {

Field field_of_any(const AnyMatrix& m) {
    return std::holds_alternative<RealMatrix>(m) ? Field::real : Field::complex;
}

template <Scalar T>
json scalar_to_json(T x) {
    if constexpr (is_complex_v<T>) {
        return json::array({x.real(), x.imag()});
    } else {
        return x;
    }
}

template <Scalar T>
json matrix_to_json(const Matrix<T>& m) {
    json data = json::array();
    for (const T& x : m.data()) data.push_back(scalar_to_json(x));
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"field", to_string(field_of<T>)}, {"data", std::move(data)}};
}

namespace {

std::size_t positive_size(const json& j, const char* key) {
    if (!j.contains(key)) throw FormatError(fmt::format("matrix object lacks \"{}\"", key));
    const json& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 1)
        throw FormatError(fmt::format("matrix \"{}\" must be a positive integer", key));
    return v.get<std::size_t>();
}

double number(const json& v, std::size_t index) {
    if (!v.is_number()) throw FormatError(fmt::format("matrix entry {} is not a number", index));
    return v.get<double>();
}

}  // namespace

AnyMatrix matrix_from_json(const json& j) {
    if (!j.is_object()) throw FormatError("matrix must be a JSON object");
    const std::size_t rows = positive_size(j, "rows");
    const std::size_t cols = positive_size(j, "cols");
    if (!j.contains("field") || !j.at("field").is_string())
        throw FormatError("matrix object lacks a string \"field\"");
    const auto field = j.at("field").get<std::string>();
    if (field != "real" && field != "complex")
        throw FormatError("matrix \"field\" must be \"real\" or \"complex\", got \"" + field + "\"");
    if (!j.contains("data") || !j.at("data").is_array()) throw FormatError("matrix object lacks a \"data\" array");
    const json& data = j.at("data");
    if (data.size() != rows * cols)
        throw FormatError(fmt::format("matrix data has {} entries, expected {}x{} = {}", data.size(), rows, cols,
                                      rows * cols));
    if (field == "real") {
        RealMatrix m(rows, cols);
        for (std::size_t i = 0; i < data.size(); ++i) m.data()[i] = number(data[i], i);
        return m;
    }
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const json& e = data[i];
        if (!e.is_array() || e.size() != 2)
            throw FormatError(fmt::format("complex matrix entry {} must be [re, im]", i));
        m.data()[i] = complex(number(e[0], i), number(e[1], i));
    }
    return m;
}

template <Scalar T>
Matrix<T> as_field(const AnyMatrix& m) {
    if (const auto* r = std::get_if<RealMatrix>(&m)) {
        if constexpr (is_complex_v<T>) {
            return to_complex(*r);
        } else {
            return *r;
        }
    }
    if constexpr (is_complex_v<T>) {
        return std::get<ComplexMatrix>(m);
    } else {
        throw FieldError("complex matrix supplied where a real one is required");
    }
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("{}: cannot open for reading", path.string()));
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError(fmt::format("{}: malformed JSON ({})", path.string(), e.what()));
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("{}: cannot open for writing", path.string()));
    out << text;
    out.flush();
    if (!out) throw IoError(fmt::format("{}: write failed", path.string()));
}

AnyMatrix read_matrix(const std::filesystem::path& path) {
    const json j = read_json_file(path);
    try {
        return matrix_from_json(j);
    } catch (const FormatError& e) {
        throw FormatError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

template <Scalar T>
void write_matrix(const std::filesystem::path& path, const Matrix<T>& m) {
    write_text_file(path, matrix_to_json(m).dump() + "\n");
}

json dataset_to_json(const Dataset& d) {
    return {{"inputs", matrix_to_json(d.inputs)}, {"targets", matrix_to_json(d.targets)}};
}

Dataset dataset_from_json(const json& j) {
    if (!j.is_object() || !j.contains("inputs") || !j.contains("targets"))
        throw FormatError("dataset must be an object with \"inputs\" and \"targets\"");
    auto real = [](const json& m, const char* name) {
        auto any = matrix_from_json(m);
        if (field_of_any(any) != Field::real) throw FormatError(fmt::format("dataset {} must be real", name));
        return std::get<RealMatrix>(std::move(any));
    };
    Dataset d{real(j.at("inputs"), "inputs"), real(j.at("targets"), "targets")};
    if (d.inputs.rows() != d.targets.rows())
        throw FormatError(fmt::format("dataset has {} input rows but {} target rows", d.inputs.rows(),
                                      d.targets.rows()));
    return d;
}

Dataset read_dataset(const std::filesystem::path& path) {
    const json j = read_json_file(path);
    try {
        return dataset_from_json(j);
    } catch (const FormatError& e) {
        throw FormatError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

void write_dataset(const std::filesystem::path& path, const Dataset& d) {
    write_text_file(path, dataset_to_json(d).dump() + "\n");
}

namespace {

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

template <Scalar T>
json report_to_json(const EstimateReport<T>& r) {
    json j;
    j["estimate"] = scalar_to_json(r.estimate);
    j["exact"] = r.exact ? scalar_to_json(*r.exact) : json(nullptr);
    j["sample_count"] = r.sample_count;
    j["standard_error"] = r.standard_error;
    j["seed"] = r.seed;
    j["law"] = to_string(r.law);
    j["z_score"] = finite_or_null(r.z_score());
    return j;
}

std::string run_csv(const RunRecord& r) {
    std::string out = "iter,risk,grad_norm,step\n";
    for (const auto& row : r.rows) {
        out += fmt::format("{},{:.17g},{:.17g},{:.17g}\n", row.iter, row.risk, row.grad_norm, row.step);
    }
    return out;
}

void write_run(const std::string& prefix, const RunRecord& r, const json& config) {
    json meta;
    meta["config"] = config;
    meta["iterations"] = r.rows.empty() ? 0 : r.rows.back().iter;
    meta["initial_risk"] = finite_or_null(r.initial_risk());
    meta["final_risk"] = finite_or_null(r.final_risk());
    const auto hit = r.iterations_to(1e-6);
    meta["iters_to_1e-6"] = hit ? json(*hit) : json(nullptr);
    meta["diverged"] = r.diverged;
    if (!r.message.empty()) meta["message"] = r.message;
    meta["wall_clock_seconds"] = r.seconds;
    write_text_file(prefix + ".csv", run_csv(r));
    write_text_file(prefix + ".json", meta.dump(2) + "\n");
}

StoredRun read_run(const std::string& prefix) {
    StoredRun run{prefix, {}, json::object()};
    const std::string csv_path = prefix + ".csv";
    std::ifstream in(csv_path);
    if (!in) throw IoError(csv_path + ": cannot open for reading");
    std::string line;
    if (!std::getline(in, line) || line != "iter,risk,grad_norm,step")
        throw FormatError(csv_path + ": missing header iter,risk,grad_norm,step");
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string field[4];
        for (auto& f : field) {
            if (!std::getline(ss, f, ',')) throw FormatError(fmt::format("{}:{}: expected 4 columns", csv_path, lineno));
        }
        char* end = nullptr;
        RunRow row;
        row.iter = std::strtoull(field[0].c_str(), &end, 10);
        if (*end != '\0') throw FormatError(fmt::format("{}:{}: bad iteration index", csv_path, lineno));
        double* slots[3] = {&row.risk, &row.grad_norm, &row.step};
        for (int k = 0; k < 3; ++k) {
            *slots[k] = std::strtod(field[k + 1].c_str(), &end);
            if (*end != '\0' || field[k + 1].empty())
                throw FormatError(fmt::format("{}:{}: bad number \"{}\"", csv_path, lineno, field[k + 1]));
        }
        run.rows.push_back(row);
    }
    const std::filesystem::path meta_path = prefix + ".json";
    if (std::filesystem::exists(meta_path)) run.meta = read_json_file(meta_path);
    return run;
}

#define GFROB_INSTANTIATE(T)                                                   \
    template json scalar_to_json(T);                                           \
    template json matrix_to_json(const Matrix<T>&);                            \
    template Matrix<T> as_field(const AnyMatrix&);                             \
    template void write_matrix(const std::filesystem::path&, const Matrix<T>&); \
    template json report_to_json(const EstimateReport<T>&);

GFROB_INSTANTIATE(double)
GFROB_INSTANTIATE(complex)

#undef GFROB_INSTANTIATE

}  // namespace gfrob::io
