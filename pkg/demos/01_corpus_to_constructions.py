"""
From a dependency treebank to construction profiles
===================================================

Parse the bundled synthetic corpus, pull out every occurrence of one verb,
and group the occurrences by their dependency signature.
"""

from importlib.resources import files

from metasoc.constructions import cluster, summarize
from metasoc.corpus import extract_instances, read_corpus

corpus = read_corpus(files("metasoc") / "data" / "synthetic_200.conllu")
print(len(corpus), "sentences, years", corpus.year_range)

# every sentence in which "lianyin" occurs yields one instance per occurrence
instances = extract_instances(corpus, "lianyin")
print(instances[0])

# groups smaller than 7, or covering less than 4% of what survives, are outliers
profile = cluster(instances)
summary = summarize(profile)
print(f"{summary.construction_count} constructions, instances {summary.instance_ratio}")
for row in summary.rows:
    print(f"  {row.pattern:<40} {row.incoming_label:<6} CN={row.constituent_number} "
          f"FOY={row.first_occurrence_year} n={row.frequency}")

# tightening the size threshold only ever removes groups here
for size in (3, 7, 9):
    print("min_cluster_size", size, "->", len(cluster(instances, size).constructions))
