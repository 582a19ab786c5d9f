raise SystemExit(__import__("capt.cli", fromlist=["main"]).main())
