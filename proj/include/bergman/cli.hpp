#ifndef BERGMAN_CLI_HPP
#define BERGMAN_CLI_HPP

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bergman/divisibility.hpp"
#include "bergman/expansion.hpp"
#include "bergman/json_writer.hpp"
#include "bergman/model_kernel.hpp"
#include "bergman/monge_ampere.hpp"
#include "bergman/parse.hpp"
#include "bergman/transforms.hpp"

namespace bergman::cli {

struct RunResult {
  int exit_code = 0;
  std::string output;
  std::string error;
};

namespace detail {

inline std::vector<double> split_doubles(const std::string& s, char sep = ',') {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep)) {
    if (tok.empty()) continue;
    size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw DomainError("malformed number '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

inline Cplx parse_point(const std::string& s) {
  auto v = split_doubles(s);
  if (v.size() == 1) return {v[0], 0.0};
  if (v.size() != 2) throw DomainError("--at expects 're,im'");
  return {v[0], v[1]};
}

inline std::vector<Cplx> parse_points(const std::string& s) {
  std::vector<Cplx> pts;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ';'))
    if (!tok.empty()) pts.push_back(parse_point(tok));
  if (pts.empty() || pts.size() > 2) throw DomainError("--at expects one or two points");
  return pts;
}

inline GaussianRational parse_exact_point(const std::string& s) {
  // "x,y" with rational components (integer, p/q or decimal literals).
  std::stringstream ss(s);
  std::string re, im = "0";
  std::getline(ss, re, ',');
  std::getline(ss, im, ',');
  auto part = [](const std::string& t) {
    BiPoly p = parse_poly(t.empty() ? "0" : t);
    if (p.is_zero()) return GaussianRational();
    if (p.terms().size() != 1 || p.terms().begin()->first != BiPoly::Key{0, 0})
      throw DomainError("expected a rational constant, got '" + t + "'");
    return p.terms().begin()->second;
  };
  GaussianRational zre = part(re), zim = part(im);
  if (!zre.is_real() || !zim.is_real())
    throw DomainError("--hint-a components must be real rationals");
  return {zre.re, zim.re};
}

inline JsonValue::Ptr poly_terms_json(const BiPoly& p) {
  auto arr = JsonValue::array();
  for (const auto& [k, c] : p.terms()) {
    auto t = JsonValue::object();
    t->set("i", JsonValue::integer(k.first));
    t->set("j", JsonValue::integer(k.second));
    t->set("re", JsonValue::rational(c.re));
    t->set("im", JsonValue::rational(c.im));
    arr->push(t);
  }
  return arr;
}

inline JsonValue::Ptr rational_fn_json(const RationalFn& f) {
  auto o = JsonValue::object();
  o->set("num", poly_terms_json(f.num));
  o->set("den", poly_terms_json(f.den));
  return o;
}

inline JsonValue::Ptr complex_rational_json(const GaussianRational& g) {
  auto o = JsonValue::object();
  o->set("re", JsonValue::rational(g.re));
  o->set("im", JsonValue::rational(g.im));
  return o;
}

struct MonomialSpec {
  double c;
  int r;
};

inline MonomialSpec parse_monomial(const std::string& s) {
  auto v = split_doubles(s);
  if (v.size() != 2) throw DomainError("--monomial expects 'c,r'");
  MonomialSpec m{v[0], int(v[1])};
  if (!(m.c > 0.0) || m.r < 2 || m.r % 2 != 0 || double(m.r) != v[1])
    throw DomainError("--monomial needs c > 0 and even integer r >= 2");
  return m;
}

}  // namespace detail

struct CommonFlags {
  std::string weight, monomial, weight_q, at, tgrid, deriv, hint_a, b_list;
  int dmax = 40;
  double quad_tol = 1e-10;
  int ntheta = 256;
  int alpha0 = 0;
  int nterms = 4;
  int r = 0;
  double h = 1e-3;
  std::string format = "json";
  std::string out_path;
};

inline int run(const std::vector<std::string>& args, std::string& out_text,
               std::string& err_text) {
  CLI::App app{"model Bergman kernels, expansion coefficients and "
               "Kahler-Einstein diagnostics"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");
  CommonFlags f;

  auto add_common = [&](CLI::App* sub) {
    sub->set_help_flag("--help", "print help");
    sub->add_option("--weight", f.weight, "weight polynomial in z, w");
    sub->add_option("--monomial", f.monomial, "monomial weight 'c,r'");
    sub->add_option("--weight-q", f.weight_q, "q polynomial directly (obstruction)");
    sub->add_option("--at", f.at, "evaluation point 're,im' (';' separates two)");
    sub->add_option("--dmax", f.dmax, "basis truncation degree");
    sub->add_option("--quad-tol", f.quad_tol, "quadrature absolute tolerance");
    sub->add_option("--ntheta", f.ntheta, "angular quadrature nodes");
    sub->add_option("--tgrid", f.tgrid, "t grid 'min,max,count' (log spaced)");
    sub->add_option("--deriv", f.deriv, "Wirtinger orders 'a1,a2'");
    sub->add_option("--alpha0", f.alpha0, "transform index alpha0");
    sub->add_option("--hint-a", f.hint_a, "candidate root 'x,y' (rational components)");
    sub->add_option("--h", f.h, "finite difference step");
    sub->add_option("--r", f.r, "even degree r");
    sub->add_option("--nterms", f.nterms, "number of fitted expansion terms");
    sub->add_option("--b", f.b_list, "symbol coefficients 'b0,b1,...'");
    sub->add_option("--format", f.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", f.out_path, "output path (default stdout)");
  };

  CLI::App* c_coeffs = app.add_subcommand("coeffs", "expansion coefficients b0..b3");
  CLI::App* c_kernel = app.add_subcommand("kernel", "model kernel evaluation");
  CLI::App* c_fit = app.add_subcommand("fit", "t-grid extraction of b coefficients");
  CLI::App* c_obstruction = app.add_subcommand("obstruction", "b3-vanishing certificate");
  CLI::App* c_ke = app.add_subcommand("ke-check", "comparing-coefficients determinant");
  CLI::App* c_quadratic = app.add_subcommand("quadratic", "exact final-quadratic check");
  CLI::App* c_ball = app.add_subcommand("ball-check", "unit-ball reference constants");
  CLI::App* c_watson = app.add_subcommand("watson", "Watson-Laplace coefficients");
  for (CLI::App* s :
       {c_coeffs, c_kernel, c_fit, c_obstruction, c_ke, c_quadratic, c_ball, c_watson})
    add_common(s);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    std::stringstream so, se;
    int code = app.exit(e, so, se);
    out_text = so.str();
    err_text = se.str();
    return code == 0 ? 0 : 2;
  }

  QuadSpec spec;
  spec.tol = f.quad_tol;
  spec.ntheta = f.ntheta;

  auto emit = [&](const JsonValue::Ptr& doc) { out_text = doc->dump(); };

  try {
    if (f.format == "csv" && !c_fit->parsed())
      throw DomainError("--format csv is only available for grid outputs (fit)");

    if (c_coeffs->parsed()) {
      if (f.weight.empty()) throw DomainError("coeffs: --weight is required");
      BiPoly p = parse_poly(f.weight);
      BCoeffs c = b_coeffs(p);
      auto doc = JsonValue::object();
      doc->set("b0", detail::poly_terms_json(c.b0));
      doc->set("b1", detail::rational_fn_json(c.b1));
      doc->set("b2", detail::rational_fn_json(c.b2));
      doc->set("b3", detail::rational_fn_json(c.b3));
      if (!f.at.empty()) {
        auto evals = JsonValue::array();
        for (Cplx z : detail::parse_points(f.at)) {
          auto v = eval_b(c, z);
          auto e = JsonValue::object();
          auto zj = JsonValue::array();
          zj->push(JsonValue::number(z.real()));
          zj->push(JsonValue::number(z.imag()));
          e->set("z", zj);
          const char* names[4] = {"b0", "b1", "b2", "b3"};
          for (int i = 0; i < 4; ++i) {
            auto pair = JsonValue::array();
            pair->push(JsonValue::number(v[i].real()));
            pair->push(JsonValue::number(v[i].imag()));
            e->set(names[i], pair);
          }
          evals->push(e);
        }
        doc->set("at", evals);
      }
      emit(doc);
    } else if (c_kernel->parsed()) {
      if (f.at.empty()) throw DomainError("kernel: --at is required");
      auto pts = detail::parse_points(f.at);
      Cplx z = pts[0];
      Cplx w = pts.size() == 2 ? pts[1] : pts[0];
      std::optional<std::pair<int, int>> deriv;
      if (!f.deriv.empty()) {
        auto d = detail::split_doubles(f.deriv);
        if (d.size() != 2) throw DomainError("--deriv expects 'a1,a2'");
        deriv = {int(d[0]), int(d[1])};
      }
      auto doc = JsonValue::object();
      Cplx value;
      if (!f.monomial.empty()) {
        auto m = detail::parse_monomial(f.monomial);
        if (deriv) {
          MonomialModel mm(m.c, m.r);
          value = mm.diag_derivative(deriv->first, deriv->second, z);
        } else {
          value = monomial_kernel(m.c, m.r, z, w);
        }
        doc->set("value_re", JsonValue::number(value.real()));
        doc->set("value_im", JsonValue::number(value.imag()));
        doc->set("dmax", JsonValue::null());
        doc->set("condition", JsonValue::null());
        doc->set("validated_radius", JsonValue::null());
      } else if (!f.weight.empty()) {
        BiPoly p = parse_poly(f.weight);
        KernelModel km = build_kernel_model(p, f.dmax, spec);
        if (deriv) {
          KernelModelDiag dk(km);
          value = dk.diag_derivative(deriv->first, deriv->second, z);
        } else {
          value = kernel_eval(km, z, w);
        }
        doc->set("value_re", JsonValue::number(value.real()));
        doc->set("value_im", JsonValue::number(value.imag()));
        doc->set("dmax", JsonValue::integer(km.dmax));
        doc->set("condition", JsonValue::number(km.condition));
        doc->set("validated_radius", JsonValue::number(km.validated_radius));
        if (!in_validated_radius(km, z, w))
          doc->set("warning", JsonValue::string("outside validated radius"));
      } else {
        throw DomainError("kernel: --weight or --monomial is required");
      }
      emit(doc);
    } else if (c_fit->parsed()) {
      if (f.weight.empty()) throw DomainError("fit: --weight is required");
      if (f.tgrid.empty()) throw DomainError("fit: --tgrid is required");
      if (f.at.empty()) throw DomainError("fit: --at is required");
      auto g = detail::split_doubles(f.tgrid);
      if (g.size() != 3) throw DomainError("--tgrid expects 'min,max,count'");
      auto grid = log_spaced_grid(g[0], g[1], int(g[2]));
      BiPoly p = parse_poly(f.weight);
      Cplx z = detail::parse_point(f.at);
      ExpansionFit fit = fit_expansion(p, z, grid, f.nterms);
      if (f.format == "csv") {
        std::string csv = "t,value,fitted,residual\n";
        for (size_t i = 0; i < grid.size(); ++i) {
          csv += csv_cell(fit.t_grid[i]) + "," + csv_cell(fit.values[i]) + "," +
                 csv_cell(fit.fitted[i]) + "," +
                 csv_cell(fit.values[i] - fit.fitted[i]) + "\n";
        }
        out_text = csv;
      } else {
        auto doc = JsonValue::object();
        auto b = JsonValue::array();
        for (double v : fit.b) b->push(JsonValue::number(v));
        doc->set("b", b);
        doc->set("residual_norm", JsonValue::number(fit.residual_norm));
        doc->set("condition", JsonValue::number(fit.condition));
        doc->set("ill_conditioned", JsonValue::boolean(fit.ill_conditioned));
        auto rows = JsonValue::array();
        for (size_t i = 0; i < grid.size(); ++i) {
          auto row = JsonValue::object();
          row->set("t", JsonValue::number(fit.t_grid[i]));
          row->set("value", JsonValue::number(fit.values[i]));
          row->set("fitted", JsonValue::number(fit.fitted[i]));
          rows->push(row);
        }
        doc->set("grid", rows);
        emit(doc);
      }
    } else if (c_obstruction->parsed()) {
      BiPoly q;
      if (!f.weight_q.empty()) {
        q = parse_poly(f.weight_q);
      } else if (!f.weight.empty()) {
        q = q_and_Q(parse_poly(f.weight)).first;
      } else {
        throw DomainError("obstruction: --weight-q or --weight is required");
      }
      std::optional<GaussianRational> hint;
      if (!f.hint_a.empty()) hint = detail::parse_exact_point(f.hint_a);
      ObstructionCertificate cert = obstruction_certificate(q, hint);
      auto doc = JsonValue::object();
      bool monomial = cert.verdict == ObstructionCertificate::Verdict::Monomial;
      doc->set("verdict", JsonValue::string(monomial ? "monomial" : "nonvanishing"));
      doc->set("c0", monomial ? JsonValue::rational(cert.c0) : JsonValue::null());
      doc->set("m", monomial ? JsonValue::integer(cert.m) : JsonValue::null());
      if (cert.has_witness) {
        doc->set("a", detail::complex_rational_json(cert.a));
        doc->set("k", JsonValue::integer(cert.k));
        doc->set("lambda", detail::complex_rational_json(cert.lambda));
        doc->set("T", detail::complex_rational_json(cert.T));
        doc->set("lhs_k", JsonValue::integer(cert.lhs_class.k));
        doc->set("lhs_lambda", detail::complex_rational_json(cert.lhs_class.lambda));
      } else {
        for (const char* key : {"a", "k", "lambda", "T", "lhs_k", "lhs_lambda"})
          doc->set(key, JsonValue::null());
      }
      emit(doc);
    } else if (c_ke->parsed()) {
      if (f.at.empty()) throw DomainError("ke-check: --at is required");
      Cplx z1 = detail::parse_point(f.at);
      KEResidual res;
      if (!f.monomial.empty()) {
        auto m = detail::parse_monomial(f.monomial);
        MonomialModel mm(m.c, m.r);
        res = ke_determinant(mm, m.r, z1, spec);
      } else if (!f.weight.empty()) {
        BiPoly p = parse_poly(f.weight);
        KernelModel km = build_kernel_model(p, f.dmax, spec);
        KernelModelDiag dk(km);
        res = ke_determinant(dk, km.r, z1, spec);
      } else {
        throw DomainError("ke-check: --weight or --monomial is required");
      }
      auto doc = JsonValue::object();
      doc->set("lhs", JsonValue::number(res.lhs));
      doc->set("rhs", JsonValue::number(res.rhs));
      doc->set("residual", JsonValue::number(res.residual));
      doc->set("ratio", JsonValue::number(res.ratio));
      auto zj = JsonValue::array();
      zj->push(JsonValue::number(res.z1.real()));
      zj->push(JsonValue::number(res.z1.imag()));
      doc->set("z1", zj);
      emit(doc);
    } else if (c_quadratic->parsed()) {
      if (f.r == 0) throw DomainError("quadratic: --r is required");
      QuadraticCheck qc = quadratic_root_check(f.r);
      auto doc = JsonValue::object();
      doc->set("lhs", JsonValue::rational(qc.lhs));
      doc->set("rhs", JsonValue::rational(qc.rhs));
      doc->set("equal", JsonValue::boolean(qc.equal));
      emit(doc);
    } else if (c_ball->parsed()) {
      if (f.at.empty()) throw DomainError("ball-check: --at is required 'x1,y1,x2,y2'");
      auto v = detail::split_doubles(f.at);
      if (v.size() != 4) throw DomainError("ball-check: --at expects 'x1,y1,x2,y2'");
      C2Point z{Cplx(v[0], v[1]), Cplx(v[2], v[3])};
      ScalarField K = ball_kernel_field();
      double h = f.h > 0 ? scaled_step(z, f.h) : 1e-3;
      double B = bergman_invariant(K, z, h);
      double J = j_operator(K, z, h);
      double Kv = ball_kernel(z);
      double residual = ke_kernel_check(K, z, h);
      auto doc = JsonValue::object();
      doc->set("B", JsonValue::number(B));
      doc->set("J", JsonValue::number(J));
      doc->set("K", JsonValue::number(Kv));
      doc->set("residual", JsonValue::number(residual));
      emit(doc);
    } else if (c_watson->parsed()) {
      if (f.b_list.empty()) throw DomainError("watson: --b is required");
      int r = f.r == 0 ? 2 : f.r;
      auto b = detail::split_doubles(f.b_list);
      WatsonExpansion w = watson_coeffs(b, f.alpha0, r, int(b.size()) - 1);
      auto doc = JsonValue::object();
      auto cj = JsonValue::array();
      for (double v : w.c) cj->push(JsonValue::number(v));
      doc->set("c", cj);
      doc->set("d0", JsonValue::number(w.d0));
      doc->set("alpha0", JsonValue::integer(w.alpha0));
      doc->set("r", JsonValue::integer(w.r));
      if (!f.tgrid.empty()) {
        auto g = detail::split_doubles(f.tgrid);
        if (g.size() != 3) throw DomainError("--tgrid expects 'min,max,count'");
        auto grid = log_spaced_grid(g[0], g[1], int(g[2]));
        WatsonValidation val = watson_vs_quadrature(b, f.alpha0, r, grid, spec);
        doc->set("max_rel_deviation", JsonValue::number(val.max_rel_deviation));
        doc->set("fitted_d0",
                 val.has_log ? JsonValue::number(val.fitted_d0) : JsonValue::null());
      }
      emit(doc);
    }
  } catch (const NumericError& e) {
    err_text = std::string("numeric failure: ") + e.what() + "\n";
    return 3;
  } catch (const DomainError& e) {
    err_text = std::string("error: ") + e.what() + "\n";
    return 2;
  }

  if (!f.out_path.empty()) {
    std::ofstream of(f.out_path, std::ios::binary);
    if (!of) {
      err_text = "error: cannot open output file " + f.out_path + "\n";
      return 2;
    }
    of << out_text;
    out_text.clear();
  }
  return 0;
}

}  // namespace bergman::cli

#endif
