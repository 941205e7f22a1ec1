#include "scma/codebook_io.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace scma {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key, const std::string& ptr) {
  if (!j.contains(key)) throw SchemaError(ptr + "/" + key, "missing required field");
  return j.at(key);
}

int require_int(const json& j, const char* key, const std::string& ptr) {
  const json& v = require(j, key, ptr);
  if (!v.is_number_integer()) throw SchemaError(ptr + "/" + key, "expected an integer");
  return v.get<int>();
}

}  // namespace

json codebook_to_json(const CodebookSet& cbs) {
  json j;
  j["schema"] = kCodebookSchema;
  j["K"] = cbs.K();
  j["J"] = cbs.J();
  j["M"] = cbs.M;
  j["N"] = cbs.fg.N();
  j["factor_graph"] = json::array();
  for (std::uint8_t b : cbs.fg.incidence()) j["factor_graph"].push_back(static_cast<int>(b));
  j["slots"] = json::array();
  for (int k = 0; k < cbs.K(); ++k)
    for (int u = 0; u < cbs.J(); ++u) j["slots"].push_back(cbs.fg.slot(k, u));
  json books = json::array();
  for (int u = 0; u < cbs.J(); ++u) {
    json mat = json::array();
    for (int k = 0; k < cbs.K(); ++k) {
      json row = json::array();
      for (int m = 0; m < cbs.M; ++m) {
        const cplx v = cbs.entry(u, k, m);
        row.push_back(json::array({v.real(), v.imag()}));
      }
      mat.push_back(std::move(row));
    }
    books.push_back(std::move(mat));
  }
  j["codebooks"] = std::move(books);
  if (!cbs.name.empty()) j["metadata"]["name"] = cbs.name;
  return j;
}

CodebookSet codebook_from_json(const json& j) {
  const std::string ptr;
  if (!j.is_object()) throw SchemaError("", "expected a JSON object");
  const json& schema = require(j, "schema", ptr);
  if (!schema.is_string() || schema.get<std::string>() != kCodebookSchema)
    throw SchemaError("/schema", "expected \"" + std::string(kCodebookSchema) + "\"");

  const int K = require_int(j, "K", ptr);
  const int J = require_int(j, "J", ptr);
  const int M = require_int(j, "M", ptr);
  const int N = require_int(j, "N", ptr);
  if (K <= 0 || J <= 0) throw SchemaError("/K", "K and J must be positive");
  if (M < 2 || (M & (M - 1)) != 0) throw SchemaError("/M", "M must be a power of two >= 2");

  const json& fgj = require(j, "factor_graph", ptr);
  if (!fgj.is_array() || fgj.size() != static_cast<size_t>(K) * J)
    throw SchemaError("/factor_graph", "expected a row-major K*J array of 0/1");
  std::vector<std::uint8_t> f;
  f.reserve(fgj.size());
  for (size_t i = 0; i < fgj.size(); ++i) {
    if (!fgj[i].is_number_integer() || (fgj[i] != 0 && fgj[i] != 1))
      throw SchemaError("/factor_graph/" + std::to_string(i), "entries must be 0 or 1");
    f.push_back(fgj[i].get<std::uint8_t>());
  }

  FactorGraph fg = [&] {
    try {
      return FactorGraph(K, J, std::move(f));
    } catch (const std::invalid_argument& e) {
      throw SchemaError("/factor_graph", e.what());
    }
  }();
  if (fg.N() != N) throw SchemaError("/N", "inconsistent with factor_graph column degree");

  if (j.contains("slots")) {
    const json& sj = j.at("slots");
    if (!sj.is_array() || sj.size() != static_cast<size_t>(K) * J)
      throw SchemaError("/slots", "expected a row-major K*J array");
    std::vector<int> slots(sj.size());
    for (size_t i = 0; i < sj.size(); ++i) {
      if (!sj[i].is_number_integer())
        throw SchemaError("/slots/" + std::to_string(i), "expected an integer");
      slots[i] = sj[i].get<int>();
    }
    try {
      fg.set_slots(std::move(slots));
    } catch (const std::invalid_argument& e) {
      throw SchemaError("/slots", e.what());
    }
  }

  const json& books = require(j, "codebooks", ptr);
  if (!books.is_array() || books.size() != static_cast<size_t>(J))
    throw SchemaError("/codebooks", "expected J codebook matrices");

  CodebookSet cbs;
  cbs.fg = std::move(fg);
  cbs.M = M;
  cbs.X.assign(J, std::vector<cplx>(static_cast<size_t>(K) * M));
  for (int u = 0; u < J; ++u) {
    const std::string bptr = "/codebooks/" + std::to_string(u);
    const json& mat = books[u];
    if (!mat.is_array() || mat.size() != static_cast<size_t>(K))
      throw SchemaError(bptr, "expected K rows");
    for (int k = 0; k < K; ++k) {
      const json& row = mat[k];
      const std::string rptr = bptr + "/" + std::to_string(k);
      if (!row.is_array() || row.size() != static_cast<size_t>(M))
        throw SchemaError(rptr, "expected M entries");
      for (int m = 0; m < M; ++m) {
        const json& e = row[m];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
          throw SchemaError(rptr + "/" + std::to_string(m), "expected [re, im]");
        const cplx v(e[0].get<double>(), e[1].get<double>());
        if (v != cplx(0, 0) && !cbs.fg.edge(k, u))
          throw SchemaError(rptr + "/" + std::to_string(m),
                            "nonzero entry outside the user's factor-graph support");
        cbs.X[u][static_cast<size_t>(k) * M + m] = v;
      }
    }
  }
  if (j.contains("metadata") && j.at("metadata").contains("name"))
    cbs.name = j.at("metadata").at("name").get<std::string>();
  return cbs;
}

void save_codebook(const CodebookSet& cbs, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << codebook_to_json(cbs).dump(1) << "\n";
}

CodebookSet load_codebook(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  return codebook_from_json(j);
}

}  // namespace scma
