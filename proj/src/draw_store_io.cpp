#include "tvpsv/draw_store_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include <json.hpp>

#include "tvpsv/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "draw store files are little endian");

namespace tvpsv {

namespace {

using nlohmann::json;

constexpr char kDrawMagic[8] = {'T', 'V', 'P', 'S', 'V', 'D', 'R', 'W'};
constexpr char kMatMagic[8] = {'T', 'V', 'P', 'S', 'V', 'M', 'A', 'T'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t read_u32(std::istream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

void write_doubles(std::ostream& out, const Eigen::MatrixXd& m) {
  // row major on disk so rows (draws) stay contiguous
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      double v = m(i, j);
      out.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
  }
}

Eigen::MatrixXd read_doubles(std::istream& in, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      double v = 0;
      in.read(reinterpret_cast<char*>(&v), sizeof v);
      m(i, j) = v;
    }
  }
  if (!in) throw data_error("draw store file is truncated");
  return m;
}

void check_magic(std::istream& in, const char (&magic)[8], const std::string& what) {
  char buf[8] = {};
  in.read(buf, 8);
  if (!in || std::memcmp(buf, magic, 8) != 0) {
    throw data_error("not a " + what + " file");
  }
  std::uint32_t version = read_u32(in);
  if (!in) throw data_error(what + " file is truncated");
  if (version > kVersion) {
    throw data_error(what + " file was written by a newer version (" +
                     std::to_string(version) + " > " + std::to_string(kVersion) + ")");
  }
}

}  // namespace

void save_draw_store(const DrawStore& store, const std::string& path) {
  std::vector<std::pair<std::string, const Eigen::MatrixXd*>> arrays;
  std::vector<Eigen::MatrixXd> promoted;  // one-column copies of the vectors
  promoted.reserve(8);
  auto add_mat = [&](const std::string& name, const Eigen::MatrixXd& m) {
    arrays.emplace_back(name, &m);
  };
  auto add_vec = [&](const std::string& name, const Eigen::VectorXd& v) {
    promoted.emplace_back(v);
    arrays.emplace_back(name, &promoted.back());
  };
  add_mat("alpha", store.alpha);
  add_mat("b_last", store.b_last);
  add_vec("h_last", store.h_last);
  add_vec("sv_mu", store.sv_mu);
  add_vec("sv_rho", store.sv_rho);
  add_vec("sv_sigma2", store.sv_sigma2);
  add_vec("nu", store.nu);
  add_mat("kappa", store.kappa);
  add_vec("lambda", store.lambda);

  json header;
  header["model_id"] = store.model_id;
  header["flags"] = {{"tvp", store.flags.tvp},
                     {"t_obs", store.flags.t_obs},
                     {"t_state", store.flags.t_state},
                     {"dl", store.flags.dl}};
  header["seed"] = store.seed;
  header["config_hash"] = store.config_hash;
  header["t_obs_count"] = store.t_obs_count;
  header["k_design"] = store.k_design;
  header["k_tvp"] = store.k_tvp;
  header["n_iter"] = store.n_iter;
  header["n_burn"] = store.n_burn;
  header["thin"] = store.thin;
  header["accept_rho"] = store.accept_rho;
  header["accept_nu"] = store.accept_nu;
  header["accept_kappa"] = store.accept_kappa;
  json ess = json::array();
  for (const auto& [name, value] : store.ess) {
    ess.push_back({{"name", name}, {"value", value}});
  }
  header["ess"] = ess;
  json dir = json::array();
  std::uint64_t offset = 0;
  for (const auto& [name, mat] : arrays) {
    dir.push_back({{"name", name},
                   {"rows", mat->rows()},
                   {"cols", mat->cols()},
                   {"offset", offset}});
    offset += static_cast<std::uint64_t>(mat->size()) * sizeof(double);
  }
  header["arrays"] = dir;
  const std::string header_text = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot open file for writing: " + path);
  out.write(kDrawMagic, 8);
  write_u32(out, kVersion);
  write_u32(out, static_cast<std::uint32_t>(header_text.size()));
  out.write(header_text.data(), static_cast<std::streamsize>(header_text.size()));
  for (const auto& [name, mat] : arrays) write_doubles(out, *mat);
  if (!out) throw data_error("write failed: " + path);
}

DrawStore load_draw_store(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open file: " + path);
  check_magic(in, kDrawMagic, "draw store");
  const std::uint32_t header_len = read_u32(in);
  std::string header_text(header_len, '\0');
  in.read(header_text.data(), header_len);
  if (!in) throw data_error("draw store file is truncated");

  json header;
  try {
    header = json::parse(header_text);
  } catch (const json::exception& e) {
    throw data_error(std::string("draw store header is corrupt: ") + e.what());
  }

  DrawStore store;
  try {
    store.model_id = header.at("model_id").get<std::string>();
    store.flags.tvp = header.at("flags").at("tvp").get<bool>();
    store.flags.t_obs = header.at("flags").at("t_obs").get<bool>();
    store.flags.t_state = header.at("flags").at("t_state").get<bool>();
    store.flags.dl = header.at("flags").at("dl").get<bool>();
    store.seed = header.at("seed").get<std::uint64_t>();
    store.config_hash = header.at("config_hash").get<std::uint64_t>();
    store.t_obs_count = header.at("t_obs_count").get<int>();
    store.k_design = header.at("k_design").get<int>();
    store.k_tvp = header.at("k_tvp").get<int>();
    store.n_iter = header.at("n_iter").get<int>();
    store.n_burn = header.at("n_burn").get<int>();
    store.thin = header.at("thin").get<int>();
    store.accept_rho = header.at("accept_rho").get<double>();
    store.accept_nu = header.at("accept_nu").get<double>();
    store.accept_kappa = header.at("accept_kappa").get<double>();
    for (const json& e : header.at("ess")) {
      store.ess.emplace_back(e.at("name").get<std::string>(),
                             e.at("value").get<double>());
    }
    for (const json& a : header.at("arrays")) {
      const std::string name = a.at("name").get<std::string>();
      const auto rows = a.at("rows").get<Eigen::Index>();
      const auto cols = a.at("cols").get<Eigen::Index>();
      Eigen::MatrixXd m = read_doubles(in, rows, cols);
      if (name == "alpha") store.alpha = std::move(m);
      else if (name == "b_last") store.b_last = std::move(m);
      else if (name == "h_last") store.h_last = m.col(0);
      else if (name == "sv_mu") store.sv_mu = m.col(0);
      else if (name == "sv_rho") store.sv_rho = m.col(0);
      else if (name == "sv_sigma2") store.sv_sigma2 = m.col(0);
      else if (name == "nu") store.nu = m.col(0);
      else if (name == "kappa") store.kappa = std::move(m);
      else if (name == "lambda") store.lambda = m.col(0);
      else throw data_error("draw store holds an unknown array '" + name + "'");
    }
  } catch (const json::exception& e) {
    throw data_error(std::string("draw store header is corrupt: ") + e.what());
  }
  return store;
}

void save_matrix(const Eigen::MatrixXd& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot open file for writing: " + path);
  out.write(kMatMagic, 8);
  write_u32(out, kVersion);
  write_u32(out, static_cast<std::uint32_t>(m.rows()));
  write_u32(out, static_cast<std::uint32_t>(m.cols()));
  write_doubles(out, m);
  if (!out) throw data_error("write failed: " + path);
}

Eigen::MatrixXd load_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open file: " + path);
  check_magic(in, kMatMagic, "matrix");
  const auto rows = static_cast<Eigen::Index>(read_u32(in));
  const auto cols = static_cast<Eigen::Index>(read_u32(in));
  if (!in) throw data_error("matrix file is truncated");
  return read_doubles(in, rows, cols);
}

}  // namespace tvpsv
