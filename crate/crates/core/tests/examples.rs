macro_rules! example {
    ($name:ident) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!(
                env!("CARGO_MANIFEST_DIR"),
                "/examples/",
                stringify!($name),
                ".rs"
            ));
        }

        #[test]
        fn $name() {
            $name::run_example().expect("example should run");
        }
    };
}

example!(solve_point);
example!(closed_forms);
example!(ultralocal_loss_gain);
example!(sweep_to_csv);
example!(custom_window);
example!(cross_validation);
