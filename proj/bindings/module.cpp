// Python bindings for the core operations: statevector kernels, encodings,
// the layered ansatz, cost/gradient/training, splits, AUC, and baselines.

#include "vqocc/baselines.hpp"
#include "vqocc/data.hpp"
#include "vqocc/encoding.hpp"
#include "vqocc/errors.hpp"
#include "vqocc/eval.hpp"
#include "vqocc/experiment.hpp"
#include "vqocc/model.hpp"
#include "vqocc/qsim.hpp"

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace vqocc;

namespace {

py::array_t<std::complex<double>> amplitudes_array(const Statevector& state) {
    py::array_t<std::complex<double>> out(static_cast<py::ssize_t>(state.size()));
    auto view = out.mutable_unchecked<1>();
    for (std::size_t i = 0; i < state.size(); ++i)
        view(static_cast<py::ssize_t>(i)) = state[i];
    return out;
}

GradientEngine engine_from(const std::string& name) {
    if (name == "adjoint")
        return GradientEngine::Adjoint;
    if (name == "parameter-shift")
        return GradientEngine::ParameterShift;
    throw InvalidArgument("engine must be 'adjoint' or 'parameter-shift', got '" + name +
                          "'");
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Variational quantum one-class classifier core";

    py::register_exception<InvalidArgument>(m, "InvalidArgumentError", PyExc_ValueError);
    py::register_exception<DegenerateInput>(m, "DegenerateInputError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
    py::register_exception<CapacityError>(m, "CapacityError", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

    py::class_<Statevector>(m, "Statevector")
        .def(py::init<int>(), py::arg("n_qubits"))
        .def_property_readonly("n_qubits", &Statevector::n_qubits)
        .def_property_readonly("amplitudes", &amplitudes_array)
        .def("squared_norm", &Statevector::squared_norm)
        .def("__len__", &Statevector::size);

    m.def("zero_state", &zero_state, py::arg("n_qubits"));
    m.def("apply_ry", [](Statevector& s, int qubit, double angle) {
        apply_ry(s, qubit, angle);
    }, py::arg("state"), py::arg("qubit"), py::arg("angle"));
    m.def("apply_cz", [](Statevector& s, int q1, int q2) { apply_cz(s, q1, q2); },
          py::arg("state"), py::arg("q1"), py::arg("q2"));
    m.def("expect_z", &expect_z, py::arg("state"), py::arg("qubit"));

    py::class_<EncodingKind>(m, "EncodingKind")
        .def_static("amplitude", &EncodingKind::amplitude)
        .def_static("frqi", &EncodingKind::frqi, py::arg("pixel_max"))
        .def_readonly("pixel_max", &EncodingKind::pixel_max);

    m.def("amplitude_encode",
          [](const std::vector<double>& x) { return amplitude_encode(x); }, py::arg("x"));
    m.def("frqi_encode",
          [](const std::vector<double>& x, double pixel_max) {
              return frqi_encode(x, pixel_max);
          },
          py::arg("x"), py::arg("pixel_max"));
    m.def("required_qubits", &required_qubits, py::arg("kind"), py::arg("n_pixels"));

    py::class_<AnsatzConfig>(m, "AnsatzConfig")
        .def(py::init([](int n_qubits, int n_trash, int layers, std::vector<int> trash) {
                 AnsatzConfig config;
                 config.n_qubits = n_qubits;
                 config.n_trash = n_trash;
                 config.layers = layers;
                 config.trash_qubits = std::move(trash);
                 return config;
             }),
             py::arg("n_qubits"), py::arg("n_trash"), py::arg("layers"),
             py::arg("trash_qubits") = std::vector<int>{})
        .def_readonly("n_qubits", &AnsatzConfig::n_qubits)
        .def_readonly("n_trash", &AnsatzConfig::n_trash)
        .def_readonly("layers", &AnsatzConfig::layers)
        .def("resolved_trash", &AnsatzConfig::resolved_trash);

    py::class_<CircuitDescriptor>(m, "CircuitDescriptor")
        .def_readonly("config", &CircuitDescriptor::config)
        .def_property_readonly("n_params",
                               [](const CircuitDescriptor& c) { return c.n_params; })
        .def_property_readonly("n_gates",
                               [](const CircuitDescriptor& c) { return c.gates.size(); });

    m.def("build_circuit", &build_circuit, py::arg("config"));
    m.def("param_count", &param_count, py::arg("config"));
    m.def("two_qubit_count", &two_qubit_count, py::arg("config"));
    m.def("depth", &depth, py::arg("config"));
    m.def("dump_circuit", &dump_circuit, py::arg("circuit"));
    m.def("apply_circuit",
          [](Statevector& state, const CircuitDescriptor& circuit,
             const std::vector<double>& params) { apply_circuit(state, circuit, params); },
          py::arg("state"), py::arg("circuit"), py::arg("params"));

    py::class_<CostKind>(m, "CostKind")
        .def_static("hamming", &CostKind::hamming)
        .def_static("log_loss", &CostKind::log_loss, py::arg("floor") = 1e-12);

    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_readwrite("learning_rate", &TrainConfig::learning_rate)
        .def_readwrite("batch_size", &TrainConfig::batch_size)
        .def_readwrite("iterations", &TrainConfig::iterations)
        .def_readwrite("count_updates", &TrainConfig::count_updates)
        .def_readwrite("seed", &TrainConfig::seed);

    py::class_<TrainedModel>(m, "TrainedModel")
        .def_property_readonly("params",
                               [](const TrainedModel& model) { return model.params; })
        .def_property_readonly(
            "training_curve",
            [](const TrainedModel& model) { return model.training_curve; })
        .def_property_readonly("n_params", [](const TrainedModel& model) {
            return model.circuit.n_params;
        });

    m.def("cost",
          [](const Statevector& state, const std::vector<int>& trash, const CostKind& kind) {
              return cost(state, trash, kind);
          },
          py::arg("state"), py::arg("trash_qubits"), py::arg("kind"));
    m.def("gradient",
          [](const CircuitDescriptor& circuit, const std::vector<double>& params,
             const std::vector<Statevector>& batch, const CostKind& kind,
             const std::string& engine) {
              return gradient(circuit, params, batch, kind, engine_from(engine));
          },
          py::arg("circuit"), py::arg("params"), py::arg("batch"), py::arg("kind"),
          py::arg("engine") = "adjoint");
    m.def("train",
          [](const std::vector<Statevector>& train_set, const CircuitDescriptor& circuit,
             const CostKind& kind, const TrainConfig& cfg, const EncodingKind& encoding) {
              return train(train_set, circuit, kind, cfg, encoding);
          },
          py::arg("train_set"), py::arg("circuit"), py::arg("kind"), py::arg("config"),
          py::arg("encoding"));
    m.def("score",
          [](const TrainedModel& model, const std::vector<double>& x) {
              return score(model, x);
          },
          py::arg("model"), py::arg("x"));
    m.def("classify",
          [](double s, double threshold, std::uint64_t tie_seed) {
              return classify(s, threshold, tie_seed) == Label::Anomalous ? "anomalous"
                                                                          : "normal";
          },
          py::arg("score"), py::arg("threshold"), py::arg("tie_seed") = 0);

    py::class_<LabeledDataset>(m, "LabeledDataset")
        .def_property_readonly("size",
                               [](const LabeledDataset& ds) { return ds.samples.size(); })
        .def_readonly("pixel_max", &LabeledDataset::pixel_max)
        .def("class_counts", &LabeledDataset::class_counts)
        .def("sample",
             [](const LabeledDataset& ds, std::size_t i) {
                 return std::pair(ds.samples.at(i).pixels, ds.samples.at(i).label);
             },
             py::arg("index"));

    m.def("load_digits", &load_digits, py::arg("path"));
    m.def("load_fashion_mnist", &load_fashion_mnist, py::arg("images_path"),
          py::arg("labels_path"));
    m.def("downsample_16",
          [](const std::vector<double>& img) { return downsample_16(img); },
          py::arg("img"));
    m.def("normalize_unit",
          [](const std::vector<double>& x) { return normalize_unit(x); }, py::arg("x"));

    py::class_<Split>(m, "Split")
        .def_readonly("train", &Split::train)
        .def_readonly("normal_class", &Split::normal_class)
        .def_property_readonly("test", [](const Split& split) {
            std::vector<std::pair<PixelVector, bool>> out;
            out.reserve(split.test.size());
            for (const auto& t : split.test)
                out.emplace_back(t.pixels, t.is_anomalous);
            return out;
        });

    m.def("make_split",
          [](const LabeledDataset& ds, int normal_class, std::uint64_t seed) {
              return make_split(ds, normal_class, seed);
          },
          py::arg("dataset"), py::arg("normal_class"), py::arg("seed"));

    m.def("roc_auc",
          [](const std::vector<double>& normal, const std::vector<double>& anomalous) {
              return roc_auc(normal, anomalous).auc;
          },
          py::arg("normal_scores"), py::arg("anomalous_scores"));
    m.def("roc_curve",
          [](const std::vector<double>& normal, const std::vector<double>& anomalous) {
              return roc_curve(normal, anomalous);
          },
          py::arg("normal_scores"), py::arg("anomalous_scores"));

    py::class_<KpcaModel>(m, "KpcaModel");
    m.def("kpca_fit",
          [](const std::vector<PixelVector>& train, double gamma, int q) {
              return kpca_fit(train, gamma, q);
          },
          py::arg("train"), py::arg("gamma"), py::arg("q"));
    m.def("kpca_score",
          [](const KpcaModel& model, const std::vector<double>& x) {
              return kpca_score(model, x);
          },
          py::arg("model"), py::arg("x"));

    py::class_<OcsvmModel>(m, "OcsvmModel")
        .def_readonly("rho", &OcsvmModel::rho)
        .def_readonly("alpha", &OcsvmModel::alpha);
    m.def("ocsvm_fit",
          [](const std::vector<PixelVector>& train, double gamma, double nu) {
              return ocsvm_fit(train, gamma, nu);
          },
          py::arg("train"), py::arg("gamma"), py::arg("nu"));
    m.def("ocsvm_score",
          [](const OcsvmModel& model, const std::vector<double>& x) {
              return ocsvm_score(model, x);
          },
          py::arg("model"), py::arg("x"));
    m.def("svdd_score",
          [](const OcsvmModel& model, const std::vector<double>& x) {
              return svdd_score(model, x);
          },
          py::arg("model"), py::arg("x"));

    m.def("save_model", &save_model, py::arg("model"), py::arg("path"));
    m.def("load_model", &load_model, py::arg("path"));
}
