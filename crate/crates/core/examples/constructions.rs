//! Generate each explicit family and verify it end to end.
//!
//! cargo run --release --example constructions

use lcfib::constructions::{
    cex_family, find_l_tuple, mainteo3_recipe, multipoint_recipe, sharp_family, spiegone_check,
    verify_recipe, Recipe,
};

fn run(recipe: Recipe) {
    let report = verify_recipe(&recipe, 4).expect("pipeline runs");
    print!("{}", report.render());
    println!();
}

fn main() {
    run(cex_family(5, 9).unwrap());
    run(sharp_family(5).unwrap());

    let ls = find_l_tuple(4, 2).unwrap();
    println!(
        "smallest tuple for r = 4, N = 2: {ls:?} ({:?})\n",
        spiegone_check(8, &ls)
    );
    let recipe = multipoint_recipe(8, &ls, None).unwrap();
    print!("{}", recipe.generated.to_file_text());
    run(recipe);

    run(mainteo3_recipe(5).unwrap());
}
