// Writes a synthetic attributed graph in the dataset file formats, for smoke
// runs and experiments when the real datasets are not at hand.

#include "cogl/errors.hpp"
#include "cogl/graph_io.hpp"
#include "cogl/synthetic.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Generate a synthetic attributed SBM dataset", "cogl-synth"};
    cogl::SyntheticSpec spec;
    std::string out;
    app.add_option("out", out, "Output directory")->required();
    app.add_option("--nodes", spec.nodes, "Node count");
    app.add_option("--classes", spec.classes, "Class count");
    app.add_option("--features", spec.features, "Feature count");
    app.add_option("--words", spec.words_per_node, "Active features per node");
    app.add_option("--topic-prob", spec.topic_prob, "Probability a word comes from the class block");
    app.add_option("--edges", spec.edges_per_node, "Edges started per node");
    app.add_option("--homophily", spec.homophily, "Probability an edge stays within the class");
    app.add_option("--train-per-class", spec.train_per_class, "Training nodes per class");
    app.add_option("--val", spec.val, "Validation nodes");
    app.add_option("--test", spec.test, "Test nodes");
    app.add_option("--seed", spec.seed, "Seed");
    CLI11_PARSE(app, argc, argv);

    try {
        std::filesystem::create_directories(out);
        cogl::save_graph(cogl::make_synthetic(spec), cogl::DatasetPaths::in_directory(out));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
