#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "udsim/aligner.hpp"
#include "udsim/attention.hpp"
#include "udsim/conllu.hpp"
#include "udsim/hypergraph.hpp"
#include "udsim/kernels.hpp"
#include "udsim/pair_reorg.hpp"
#include "udsim/similarity.hpp"
#include "udsim/stats.hpp"

namespace py = pybind11;
using namespace udsim;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const Array& a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-d array");
  Matrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
  auto r = a.unchecked<2>();
  for (py::ssize_t i = 0; i < r.shape(0); ++i)
    for (py::ssize_t j = 0; j < r.shape(1); ++j) m(i, j) = r(i, j);
  return m;
}

Array to_array(const Matrix& m) {
  Array a({m.rows(), m.cols()});
  auto w = a.mutable_unchecked<2>();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) w(i, j) = m(i, j);
  return a;
}

SimConfig sim_config(double theta, double beta, const std::string& empty) {
  SimConfig c;
  c.theta = theta;
  c.beta = beta;
  c.empty_dependent_sum = parse_empty_dependent_sum(empty);
  return c;
}

KernelConfig kernel_config(double theta, double alpha, double nu, double ck_beta, double ck_delta) {
  return {theta, alpha, nu, ck_beta, ck_delta};
}

DependentOrder parse_order(const std::string& name) {
  if (name == "surface") return DependentOrder::surface;
  if (name == "relation_taxonomy") return DependentOrder::relation_taxonomy;
  throw py::value_error("order must be 'surface' or 'relation_taxonomy'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cross-lingual syntactic similarity over Universal Dependencies parses.";

  static py::exception<ConlluError> conllu_error(m, "ConlluError", PyExc_ValueError);
  static py::exception<AlignError> align_error(m, "AlignError", PyExc_RuntimeError);
  static py::exception<SimilarityError> sim_error(m, "SimilarityError", PyExc_ValueError);
  static py::exception<KernelError> kernel_error(m, "KernelError", PyExc_ValueError);
  static py::exception<AttentionError> attention_error(m, "AttentionError", PyExc_ValueError);
  static py::exception<ReorgError> reorg_error(m, "ReorgError", PyExc_ValueError);
  static py::exception<StatsError> stats_error(m, "StatsError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConlluError& e) {
      py::set_error(conllu_error, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    } catch (const AlignError& e) {
      py::set_error(align_error, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    } catch (const SimilarityError& e) {
      py::set_error(sim_error, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    } catch (const KernelError& e) {
      py::set_error(kernel_error, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    } catch (const AttentionError& e) {
      py::set_error(attention_error, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    } catch (const ReorgError& e) {
      py::set_error(reorg_error, e.what());
    } catch (const StatsError& e) {
      py::set_error(stats_error, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  py::class_<Token>(m, "Token")
      .def(py::init([](int id, std::string form, int head, std::string deprel, std::string lemma,
                       std::string upos) { return Token{id, form, lemma, upos, deprel, head}; }),
           py::arg("id"), py::arg("form"), py::arg("head"), py::arg("deprel"), py::arg("lemma") = "_",
           py::arg("upos") = "_")
      .def_readonly("id", &Token::id)
      .def_readonly("form", &Token::form)
      .def_readonly("lemma", &Token::lemma)
      .def_readonly("upos", &Token::upos)
      .def_readonly("deprel", &Token::deprel)
      .def_readonly("head", &Token::head)
      .def("__repr__", [](const Token& t) {
        return "Token(" + std::to_string(t.id) + ", '" + t.form + "', head=" + std::to_string(t.head) +
               ", deprel='" + t.deprel + "')";
      });

  py::class_<DepTree>(m, "DepTree")
      .def(py::init<std::string, std::string, std::vector<Token>>(), py::arg("sent_id"), py::arg("language"),
           py::arg("tokens"))
      .def_property_readonly("sent_id", &DepTree::sent_id)
      .def_property_readonly("language", &DepTree::language)
      .def_property_readonly("tokens",
                             [](const DepTree& t) { return std::vector<Token>(t.tokens().begin(), t.tokens().end()); })
      .def_property_readonly("root_id", &DepTree::root_id)
      .def("__len__", &DepTree::size)
      .def(py::self == py::self);

  m.def(
      "parse_conllu",
      [](const std::string& text, bool strip, const std::string& lang) {
        return parse_conllu(text, {strip, lang});
      },
      py::arg("text"), py::arg("strip_deprel_subtypes") = false, py::arg("default_language") = "");
  m.def(
      "serialize_conllu", [](const std::vector<DepTree>& trees) { return serialize_conllu(trees); },
      py::arg("trees"));

  py::class_<Hypergraph>(m, "Hypergraph")
      .def("render_lines", &Hypergraph::render_lines)
      .def("heights", &Hypergraph::heights, py::arg("beta") = 0.2)
      .def_property_readonly("root", &Hypergraph::root)
      .def("__len__", &Hypergraph::size);
  m.def(
      "build_hypergraph",
      [](const DepTree& t, const std::string& order) { return Hypergraph(t, parse_order(order)); },
      py::arg("tree"), py::arg("order") = "surface");

  py::class_<AlignmentSet>(m, "AlignmentSet")
      .def(py::init([](std::size_t n, std::size_t k, const std::vector<std::pair<int, int>>& pairs) {
             AlignmentSet a(n, k);
             for (auto [i, j] : pairs) a.insert(i, j);
             return a;
           }),
           py::arg("src_len"), py::arg("tgt_len"), py::arg("pairs") = std::vector<std::pair<int, int>>{})
      .def_property_readonly("pairs", [](const AlignmentSet& a) {
        return std::vector<std::pair<int, int>>(a.pairs().begin(), a.pairs().end());
      })
      .def("transposed", &AlignmentSet::transposed)
      .def("__len__", &AlignmentSet::size)
      .def(py::self == py::self);

  m.def(
      "align",
      [](const DepTree& src, const DepTree& tgt, const std::string& backend, std::string lexicon,
         std::string alignments, std::string url, bool case_fold) {
        AlignerConfig c;
        c.backend = parse_backend(backend);
        c.lexicon_path = lexicon;
        c.file_path = alignments;
        c.remote_url = url;
        c.case_fold = case_fold;
        return align(src, tgt, c);
      },
      py::arg("src"), py::arg("tgt"), py::arg("backend") = "exact", py::arg("lexicon_path") = "",
      py::arg("alignment_path") = "", py::arg("remote_url") = "", py::arg("case_fold") = true);

  m.def(
      "build_matrix",
      [](const DepTree& src, const DepTree& tgt, const AlignmentSet& a, double theta, double beta,
         const std::string& empty) {
        return to_array(build_matrix(Hypergraph(src), Hypergraph(tgt), a, sim_config(theta, beta, empty)).values);
      },
      py::arg("src"), py::arg("tgt"), py::arg("alignment"), py::arg("theta") = 1.5, py::arg("beta") = 0.2,
      py::arg("empty_dependent_sum") = "zero");
  m.def(
      "score",
      [](const Array& values) {
        SimilarityMatrix sm{to_matrix(values), {}, {}, {}};
        return score(sm);
      },
      py::arg("matrix"));
  m.def(
      "self_score",
      [](const DepTree& t, double theta, double beta, const std::string& empty, bool case_fold) {
        return self_score(t, sim_config(theta, beta, empty), case_fold);
      },
      py::arg("tree"), py::arg("theta") = 1.5, py::arg("beta") = 0.2, py::arg("empty_dependent_sum") = "zero",
      py::arg("case_fold") = true);
  m.def("normalized_score", &normalized_score, py::arg("pair_score"), py::arg("en_en_score"));

  m.def(
      "sabk",
      [](const DepTree& a, const DepTree& b, double theta) { return sabk(a, b, kernel_config(theta, 1, 0.5, 0.5, 0.5)); },
      py::arg("a"), py::arg("b"), py::arg("theta") = 1.5);
  m.def(
      "kernels",
      [](const std::vector<DepTree>& corpus, const std::string& a, const std::string& b, double theta, double alpha,
         double nu, double ck_beta, double ck_delta) {
        const auto table = build_tfidf(corpus);
        const DepTree* ta = nullptr;
        const DepTree* tb = nullptr;
        for (const auto& t : corpus) {
          if (t.sent_id() == a) ta = &t;
          if (t.sent_id() == b) tb = &t;
        }
        if (!ta || !tb) throw KernelError(KernelErrorKind::SentenceNotInCorpus, "sent_id not in corpus");
        const auto k = all_kernels(*ta, *tb, table, kernel_config(theta, alpha, nu, ck_beta, ck_delta));
        py::dict out;
        out["sabk"] = k.sabk;
        out["tabk"] = k.tabk;
        out["msk"] = k.msk;
        out["ck"] = k.ck;
        return out;
      },
      py::arg("corpus"), py::arg("a"), py::arg("b"), py::arg("theta") = 1.5, py::arg("alpha") = 1.0,
      py::arg("nu") = 0.5, py::arg("ck_beta") = 0.5, py::arg("ck_delta") = 0.5);

  m.def(
      "expand_bias",
      [](const Array& values, const std::string& token_map, std::size_t length, bool rescale) {
        SimilarityMatrix sm{to_matrix(values), {}, {}, {}};
        return to_array(expand_bias(sm, TokenMap::parse(token_map), {length, rescale}).values);
      },
      py::arg("matrix"), py::arg("token_map"), py::arg("length") = 0, py::arg("rescale") = false);
  m.def(
      "ud_attention",
      [](const Array& q, const Array& k, const Array& v, const Array& bias) {
        return to_array(ud_attention(to_matrix(q), to_matrix(k), to_matrix(v), to_matrix(bias)));
      },
      py::arg("q"), py::arg("k"), py::arg("v"), py::arg("bias"));

  m.def(
      "reorganize",
      [](const std::string& tsv, const std::string& mode) {
        std::vector<py::tuple> out;
        for (const auto& p : reorganize(parse_quadruples(tsv), parse_reorg_mode(mode)))
          out.push_back(py::make_tuple(p.id, p.side_a, p.side_b, static_cast<int>(p.label), to_string(p.provenance)));
        return out;
      },
      py::arg("tsv"), py::arg("mode") = "figure");

  m.def(
      "pearson",
      [](const std::vector<double>& x, const std::vector<double>& y) {
        const auto c = pearson(x, y);
        return py::make_tuple(c.r, c.p);
      },
      py::arg("x"), py::arg("y"));
}
