from vicsim.cli import main

raise SystemExit(main())
