//! Turns a few user stories into a Goal Net and prints it as Graphviz DOT.
//!
//! Run with `cargo run --example goal_net_from_stories | dot -Tsvg > net.svg`.

use std::collections::BTreeMap;

use smart_agile::goalnet::{build_goal_net, export, parse_corpus, validate_net, ExportFormat, GoalSpec};

const STORIES: &str = "\
1 As a reader, I want to find articles quickly so that I can keep up with the news
1.1 As a reader, I want to search by keyword
- Build a keyword index
- Add a search box
1.2 As a reader, I want to browse by topic
- Tag articles with topics
2 As an editor, I want to publish without delay
- Add a one-click publish button
";

fn main() {
    let stories = parse_corpus(STORIES).expect("stories follow the template");
    let spec = GoalSpec {
        root: "Readers stay informed".into(),
        goals: vec!["Easy discovery".into(), "Fresh content".into()],
        assignment: BTreeMap::from([("1".into(), "Easy discovery".into()), ("2".into(), "Fresh content".into())]),
        transitions: BTreeMap::new(),
        environment: BTreeMap::from([("1.1".into(), vec![("Team".into(), "two backend developers".into())])]),
    };
    let net = build_goal_net(&stories, &spec).expect("every top-level story is assigned");
    if let Err(violations) = validate_net(&net) {
        for v in violations {
            eprintln!("{v}");
        }
        std::process::exit(1);
    }
    eprintln!("{} goals over {} levels, {} transitions", net.nodes.len(), net.depth(), net.transitions.len());
    print!("{}", export(&net, ExportFormat::Dot));
}
