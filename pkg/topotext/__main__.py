from topotext.cli import main

raise SystemExit(main())
