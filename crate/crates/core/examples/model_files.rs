//! File formats: dataset CSV with the optional rank line, model JSON with
//! exact round trips, and structural validation of a model document.

use sbcn::model::{read_dataset_csv, validate_model, write_dataset_csv};
use sbcn::{learn_sbcn, LearnOptions, SbcnModel};

fn main() -> sbcn::Result<()> {
    let csv = "cause,effect,noise\n#rank:0,1,1\n1,1,0\n1,1,1\n0,0,1\n0,0,0\n1,0,1\n0,0,0\n1,1,0\n0,1,1\n";
    let data = read_dataset_csv(csv.as_bytes())?;
    let mut out = Vec::new();
    write_dataset_csv(&data, &mut out)?;
    assert_eq!(String::from_utf8_lossy(&out), csv);

    let model = learn_sbcn(&data, &LearnOptions::default());
    let json = model.to_json();
    println!("{json}");
    assert_eq!(SbcnModel::from_json(&json)?, model);

    // a hand-edited document with a parent list that disagrees with the arcs
    let mut doc = model.to_document();
    doc.nodes[0].parents.push(2);
    for v in validate_model(&doc) {
        println!("violation: {v}");
    }
    match read_dataset_csv("a,b\n0,1\n1,7\n".as_bytes()) {
        Err(e) => println!("bad csv: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
