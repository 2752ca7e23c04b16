#include "kreinspec/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace kreinspec {

namespace {

Complex read_entry(std::istream& in, const char* what) {
  std::string tok;
  if (!(in >> tok)) throw ParseError(std::string("unexpected end of input while reading ") + what);
  auto comma = tok.find(',');
  if (comma == std::string::npos)
    throw ParseError(std::string("expected 're,im' pair for ") + what + ", got '" + tok + "'");
  try {
    double re = std::stod(tok.substr(0, comma));
    double im = std::stod(tok.substr(comma + 1));
    return Complex(re, im);
  } catch (const std::exception&) {
    throw ParseError(std::string("cannot parse complex entry '") + tok + "'");
  }
}

Matrix read_matrix(std::istream& in, int rows, int cols, const char* what) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = read_entry(in, what);
  return m;
}

void write_matrix(std::ostream& out, const Matrix& m) {
  char buf[80];
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g", m(i, j).real(), m(i, j).imag());
      out << buf << (j + 1 < m.cols() ? " " : "");
    }
    out << "\n";
  }
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return in;
}

}  // namespace

BlockOperator read_block_operator(std::istream& in, double tol_sym) {
  int np = 0, nm = 0;
  if (!(in >> np >> nm) || np < 0 || nm < 0 || np + nm == 0)
    throw ParseError("block instance: bad 'n_plus n_minus' header");
  Matrix sp = read_matrix(in, np, np, "S+");
  Matrix sm = read_matrix(in, nm, nm, "S-");
  Matrix m = read_matrix(in, np, nm, "M");
  try {
    return assemble(std::move(sp), std::move(sm), std::move(m), tol_sym);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("block instance: ") + e.what());
  }
}

BlockOperator read_block_operator_file(const std::string& path, double tol_sym) {
  auto in = open_or_throw(path);
  return read_block_operator(in, tol_sym);
}

void write_block_operator(std::ostream& out, const BlockOperator& b) {
  out << b.n_plus() << " " << b.n_minus() << "\n";
  write_matrix(out, b.s_plus);
  write_matrix(out, b.s_minus);
  write_matrix(out, b.m);
}

NonNegativePair read_pair(std::istream& in, double tol_sym) {
  int n = 0;
  if (!(in >> n) || n <= 0) throw ParseError("pair: bad dimension header");
  IntVector signs(n);
  for (int i = 0; i < n; ++i) {
    if (!(in >> signs(i))) throw ParseError("pair: missing signature entries");
  }
  FundamentalSymmetry j;
  try {
    j = FundamentalSymmetry(signs);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("pair: ") + e.what());
  }
  Matrix a0 = read_matrix(in, n, n, "A0");
  Matrix v = read_matrix(in, n, n, "V");
  try {
    return NonNegativePair::checked(KreinOperator{std::move(a0), std::move(j)}, std::move(v),
                                    tol_sym);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("pair: ") + e.what());
  }
}

NonNegativePair read_pair_file(const std::string& path, double tol_sym) {
  auto in = open_or_throw(path);
  return read_pair(in, tol_sym);
}

void write_pair(std::ostream& out, const NonNegativePair& pair) {
  const int n = pair.a0.dim();
  out << n << "\n";
  for (int i = 0; i < n; ++i) out << pair.a0.symmetry.sign(i) << (i + 1 < n ? " " : "\n");
  write_matrix(out, pair.a0.matrix);
  write_matrix(out, pair.v);
}

SturmLiouvilleProblem read_problem(std::istream& in) {
  double L = 0.0;
  int n = 0;
  bool have_l = false, have_n = false, have_q = false;
  Potential q;
  std::string key;
  while (in >> key) {
    if (key == "L") {
      if (!(in >> L)) throw ParseError("problem: bad L value");
      have_l = true;
    } else if (key == "n") {
      if (!(in >> n)) throw ParseError("problem: bad n value");
      have_n = true;
    } else if (key == "potential") {
      std::string spec;
      if (!(in >> spec)) throw ParseError("problem: missing potential spec");
      if (spec == "samples") {
        if (!have_n) throw ParseError("problem: n must precede sampled potential");
        RealVector s(n);
        for (int i = 0; i < n; ++i)
          if (!(in >> s(i))) throw ParseError("problem: not enough potential samples");
        q = Potential::from_samples(std::move(s));
      } else {
        try {
          q = Potential::parse(spec);
        } catch (const std::invalid_argument& e) {
          throw ParseError(e.what());
        }
      }
      have_q = true;
    } else {
      throw ParseError("problem: unknown key '" + key + "'");
    }
  }
  if (!have_l || !have_n || !have_q)
    throw ParseError("problem: L, n and potential are all required");
  try {
    return SturmLiouvilleProblem(L, n, std::move(q));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("problem: ") + e.what());
  }
}

SturmLiouvilleProblem read_problem_file(const std::string& path) {
  auto in = open_or_throw(path);
  return read_problem(in);
}

std::string spectrum_csv(const std::vector<SpectralPoint>& points) {
  std::ostringstream os;
  os << "re_lambda,im_lambda,type,j_norm\n";
  char buf[128];
  for (const SpectralPoint& p : points) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%s,%.17g\n", p.lambda.real(), p.lambda.imag(),
                  to_string(p.type), p.j_norm);
    os << buf;
  }
  return os.str();
}

}  // namespace kreinspec
