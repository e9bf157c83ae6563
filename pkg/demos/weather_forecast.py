"""Learning a forecasting rule from a noisy discretized series.

A synthetic weather series hides one dependency: high humidity together
with low pressure brings rain in the next step. Ten percent of the
target labels are flipped. The pipeline discretizes the series, slices
it into one-step history windows, and learns a rule; block
cross-validation then compares the learned rules against a depth-1
decision stump on the same folds.

Run: python3 demos/weather_forecast.py
"""

from importlib import resources

from minilas import (
    TaskSource,
    TaskTemplate,
    WindowSpec,
    baseline_compare,
    build_task,
    default_scoring_for,
    discretize,
    learn,
    load_discretization,
    parse_program,
    synthesize_series,
    task_text,
)

ROWS = 240
NOISE = 0.1
SEED = 0


def main() -> None:
    spec = load_discretization(
        resources.files("minilas").joinpath("assets")
        .joinpath("weather_levels.toml").read_text(encoding="utf-8")
    )
    planted = parse_program(
        resources.files("minilas").joinpath("assets")
        .joinpath("planted_rain.lp").read_text(encoding="utf-8")
    ).rules[0]
    window = WindowSpec(history=1, target="rain")

    print(f"Hidden dependency: {planted.text}")
    print(f"Series: {ROWS} hourly rows, {NOISE:.0%} of rain labels flipped.")
    table = synthesize_series(
        planted, spec, window, rows=ROWS, seed=SEED, flip_rate=NOISE
    )
    print()

    template = TaskTemplate(spec, default_level="none")
    task = build_task(discretize(table, spec), window, template)
    print(f"The series becomes {len(task.examples)} windowed examples. "
          "The first one:")
    first = task_text(task).split("#pos", 2)
    print("#pos" + first[1].rstrip())
    print()

    print("Learning one rule on the full series "
          "(surcharge on single-timestamp bodies):")
    result = learn(task, default_scoring_for(window))
    for text in result.hypothesis.texts:
        print(f"  learned: {text}")
    flips = sum(1 for o in result.outcomes if not o.accepted)
    print(f"  cost {result.hypothesis.cost}; "
          f"{flips} windows left to the noise penalty")
    print()

    print("Block cross-validation, 10 folds of 4 training days, "
          "against a depth-1 stump:")
    report = baseline_compare(
        TaskSource(table, window, template),
        folds=10, train_days=4, day_length=24,
    )
    print(report.crossval.table_text())
    print(report.table_text())


if __name__ == "__main__":
    main()
